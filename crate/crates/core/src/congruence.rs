//! Breadth-first rewriting in finitely presented commutative monoids whose
//! relations have 0/1 sides.
//!
//! States are multiplicity vectors. A rule `lhs ≡ rhs` rewrites
//! `x ↦ x − lhs + rhs` when `x ≥ lhs`, and back. Coordinates above the cap are never
//! entered; a search that never needed to drop a state and ran out of
//! frontier has enumerated a whole congruence class.

use std::collections::{HashMap, VecDeque};

use crate::statmeas::AtomSet;

pub type State = Vec<u32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub lhs: AtomSet,
    pub rhs: AtomSet,
    /// Index of the move relation this rule comes from.
    pub relation: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Presentation {
    pub n: usize,
    pub rules: Vec<Rule>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub rule: usize,
    pub forward: bool,
}

impl Step {
    pub fn inverse(self) -> Self {
        Step {
            rule: self.rule,
            forward: !self.forward,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathStep {
    pub from: State,
    pub step: Step,
    pub to: State,
}

fn dominates(x: &State, set: AtomSet) -> bool {
    set.iter().all(|a| x[a] > 0)
}

pub fn support(x: &State) -> AtomSet {
    AtomSet::from_atoms(x.iter().enumerate().filter(|(_, &m)| m > 0).map(|(a, _)| a))
}

impl Presentation {
    /// Adds a rule unless it is trivial or already present in either
    /// orientation.
    pub fn push(&mut self, rule: Rule) {
        if rule.lhs == rule.rhs {
            return;
        }
        if self
            .rules
            .iter()
            .any(|r| (r.lhs == rule.lhs && r.rhs == rule.rhs) || (r.lhs == rule.rhs && r.rhs == rule.lhs))
        {
            return;
        }
        self.rules.push(rule);
    }

    pub fn apply(&self, x: &State, step: Step) -> Option<State> {
        let r = &self.rules[step.rule];
        let (take, give) = if step.forward { (r.lhs, r.rhs) } else { (r.rhs, r.lhs) };
        if !dominates(x, take) {
            return None;
        }
        let mut y = x.clone();
        for a in take.iter() {
            y[a] -= 1;
        }
        for a in give.iter() {
            y[a] += 1;
        }
        Some(y)
    }

    fn steps(&self) -> impl Iterator<Item = Step> + '_ {
        (0..self.rules.len()).flat_map(|rule| [true, false].into_iter().map(move |forward| Step { rule, forward }))
    }
}

/// Outcome of a one-sided search.
#[derive(Clone, Debug)]
pub struct Search {
    /// Path from the start to the first state satisfying the target.
    pub found: Option<Vec<PathStep>>,
    /// True when the whole class was enumerated within the caps.
    pub exhausted: bool,
    pub visited: usize,
    /// Union of the supports of all visited states.
    pub support: AtomSet,
}

struct Tree {
    parent: HashMap<State, Option<(State, Step)>>,
}

impl Tree {
    fn new(root: State) -> Self {
        let mut parent = HashMap::new();
        parent.insert(root, None);
        Self { parent }
    }

    /// Steps from the root to `x`.
    fn path_to(&self, x: &State) -> Vec<PathStep> {
        let mut out = Vec::new();
        let mut cur = x.clone();
        while let Some(Some((p, st))) = self.parent.get(&cur) {
            out.push(PathStep {
                from: p.clone(),
                step: *st,
                to: cur.clone(),
            });
            cur = p.clone();
        }
        out.reverse();
        out
    }
}

pub fn search(
    pres: &Presentation,
    start: &State,
    cap: u32,
    max_states: usize,
    target: impl Fn(&State) -> bool,
) -> Search {
    let mut tree = Tree::new(start.clone());
    let mut queue = VecDeque::from([start.clone()]);
    let mut truncated = false;
    let mut sup = support(start);
    if target(start) {
        return Search {
            found: Some(Vec::new()),
            exhausted: false,
            visited: 1,
            support: sup,
        };
    }
    while let Some(x) = queue.pop_front() {
        for st in pres.steps() {
            let Some(y) = pres.apply(&x, st) else {
                continue;
            };
            if tree.parent.contains_key(&y) {
                continue;
            }
            if y.iter().any(|&m| m > cap) || tree.parent.len() >= max_states {
                truncated = true;
                continue;
            }
            sup = sup.union(support(&y));
            tree.parent.insert(y.clone(), Some((x.clone(), st)));
            if target(&y) {
                return Search {
                    found: Some(tree.path_to(&y)),
                    exhausted: false,
                    visited: tree.parent.len(),
                    support: sup,
                };
            }
            queue.push_back(y);
        }
    }
    Search {
        found: None,
        exhausted: !truncated,
        visited: tree.parent.len(),
        support: sup,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Meet {
    /// Rewriting path from `u` to `v`.
    Path(Vec<PathStep>),
    /// The class of one side was enumerated without meeting the other.
    Exhausted {
        from_left: bool,
        visited: usize,
    },
    Budget {
        visited: usize,
    },
}

/// Bidirectional search for a rewriting path `u ⇝ v`.
pub fn connect(pres: &Presentation, u: &State, v: &State, cap: u32, max_states: usize) -> Meet {
    if u == v {
        return Meet::Path(Vec::new());
    }
    let mut trees = [Tree::new(u.clone()), Tree::new(v.clone())];
    let mut frontiers = [vec![u.clone()], vec![v.clone()]];
    let mut truncated = [false, false];
    loop {
        let total = trees[0].parent.len() + trees[1].parent.len();
        for side in 0..2 {
            if frontiers[side].is_empty() && !truncated[side] {
                return Meet::Exhausted {
                    from_left: side == 0,
                    visited: trees[side].parent.len(),
                };
            }
        }
        if frontiers[0].is_empty() && frontiers[1].is_empty() {
            return Meet::Budget { visited: total };
        }
        let side = if frontiers[1].is_empty() || (!frontiers[0].is_empty() && frontiers[0].len() <= frontiers[1].len())
        {
            0
        } else {
            1
        };
        let other = 1 - side;
        let mut next = Vec::new();
        for x in std::mem::take(&mut frontiers[side]) {
            for st in pres.steps() {
                let Some(y) = pres.apply(&x, st) else {
                    continue;
                };
                if trees[side].parent.contains_key(&y) {
                    continue;
                }
                if y.iter().any(|&m| m > cap) || trees[0].parent.len() + trees[1].parent.len() >= max_states {
                    truncated[side] = true;
                    continue;
                }
                trees[side].parent.insert(y.clone(), Some((x.clone(), st)));
                if trees[other].parent.contains_key(&y) {
                    let mut path = trees[0].path_to(&y);
                    let back = trees[1].path_to(&y);
                    for ps in back.into_iter().rev() {
                        path.push(PathStep {
                            from: ps.to,
                            step: ps.step.inverse(),
                            to: ps.from,
                        });
                    }
                    return Meet::Path(path);
                }
                next.push(y);
            }
        }
        frontiers[side] = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(rules: &[(&[usize], &[usize])], n: usize) -> Presentation {
        let mut p = Presentation { n, rules: vec![] };
        for (i, (l, r)) in rules.iter().enumerate() {
            p.push(Rule {
                lhs: AtomSet::from_atoms(l.iter().copied()),
                rhs: AtomSet::from_atoms(r.iter().copied()),
                relation: i,
            });
        }
        p
    }

    fn replay(p: &Presentation, u: &State, path: &[PathStep]) -> State {
        let mut cur = u.clone();
        for ps in path {
            assert_eq!(ps.from, cur);
            cur = p.apply(&cur, ps.step).unwrap();
            assert_eq!(cur, ps.to);
        }
        cur
    }

    #[test]
    fn swaps_connect_within_orbits() {
        let p = pres(&[(&[0], &[2]), (&[1], &[3])], 4);
        let u = vec![2, 1, 0, 0];
        let v = vec![1, 0, 1, 1];
        match connect(&p, &u, &v, 10, 1000) {
            Meet::Path(path) => assert_eq!(replay(&p, &u, &path), v),
            other => panic!("{other:?}"),
        }
        match connect(&p, &vec![1, 0, 0, 0], &vec![0, 1, 0, 0], 10, 1000) {
            Meet::Exhausted { .. } => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn null_atoms_make_classes_infinite() {
        // [1] ≡ 0
        let p = pres(&[(&[1], &[])], 2);
        match connect(&p, &vec![1, 0], &vec![0, 0], 5, 1000) {
            Meet::Budget { .. } => {}
            other => panic!("{other:?}"),
        }
        match connect(&p, &vec![1, 3], &vec![1, 0], 5, 1000) {
            Meet::Path(path) => assert_eq!(path.len(), 3),
            other => panic!("{other:?}"),
        }
        let s = search(&p, &vec![0, 0], 4, 1000, |_| false);
        assert!(!s.exhausted);
        assert_eq!(s.support, AtomSet::singleton(1));
    }
}
