//! Finite measurable spaces with inverse-monoid actions and the morphisms
//! between them.
//!
//! Actions are total point maps. `action(s t) = action(s) ∘ action(t)`, so
//! pullbacks compose contravariantly: `(s t)⁻¹ A = t⁻¹ (s⁻¹ A)`.
//!
//! Morphism checks range over target atoms only. Both sides of
//! `f⁻¹(t⁻¹B) = f_star(t)⁻¹(f⁻¹B)` preserve disjoint unions in `B`, and every
//! measurable `B` is a disjoint union of atoms.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::inverse_semigroup::{InverseMonoidTable, MonoidTable};

/// Hard limit on the number of atoms, fixed by the bitmask representation.
pub const MAX_ATOMS: usize = 64;

/// A set of atoms as a bitmask. Measurable sets are exactly atom sets.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomSet(pub u64);

impl AtomSet {
    pub const EMPTY: AtomSet = AtomSet(0);

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            AtomSet(u64::MAX)
        } else {
            AtomSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(a: usize) -> Self {
        AtomSet(1u64 << a)
    }

    pub fn from_atoms<I: IntoIterator<Item = usize>>(atoms: I) -> Self {
        atoms.into_iter().fold(Self::EMPTY, |s, a| s.with(a))
    }

    pub fn contains(self, a: usize) -> bool {
        a < 64 && self.0 >> a & 1 == 1
    }

    pub fn with(self, a: usize) -> Self {
        AtomSet(self.0 | 1u64 << a)
    }

    pub fn without(self, a: usize) -> Self {
        AtomSet(self.0 & !(1u64 << a))
    }

    pub fn union(self, other: Self) -> Self {
        AtomSet(self.0 | other.0)
    }

    pub fn inter(self, other: Self) -> Self {
        AtomSet(self.0 & other.0)
    }

    pub fn minus(self, other: Self) -> Self {
        AtomSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |&a| bits >> a & 1 == 1)
    }

    /// All subsets of `self`, in increasing bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = AtomSet> {
        let mask = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask {
                None
            } else {
                Some((cur.wrapping_sub(mask)) & mask)
            };
            Some(AtomSet(cur))
        })
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// Points partitioned into atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMeasurableSpace {
    points: Vec<String>,
    atoms: Vec<Vec<usize>>,
    atom_of: Vec<usize>,
}

pub fn build_space(points: Vec<String>, atoms: Vec<Vec<usize>>) -> Result<FiniteMeasurableSpace> {
    let n = points.len();
    if n == 0 {
        return Err(Error::NotPartition("no points".into()));
    }
    if atoms.len() > MAX_ATOMS {
        return Err(Error::NotPartition(format!(
            "{} atoms exceed the limit of {MAX_ATOMS}",
            atoms.len()
        )));
    }
    let mut atom_of = vec![usize::MAX; n];
    for (i, block) in atoms.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::NotPartition(format!("atom {i} is empty")));
        }
        for &p in block {
            if p >= n {
                return Err(Error::NotPartition(format!("atom {i} names unknown point {p}")));
            }
            if atom_of[p] != usize::MAX {
                return Err(Error::NotPartition(format!(
                    "overlap: point {} lies in atoms {} and {i}",
                    points[p], atom_of[p]
                )));
            }
            atom_of[p] = i;
        }
    }
    if let Some(p) = atom_of.iter().position(|&a| a == usize::MAX) {
        return Err(Error::NotPartition(format!("gap: point {} is in no atom", points[p])));
    }
    let mut seen = HashMap::new();
    for (i, label) in points.iter().enumerate() {
        if let Some(j) = seen.insert(label.clone(), i) {
            return Err(Error::Malformed(format!(
                "duplicate point label {label:?} at {j} and {i}"
            )));
        }
    }
    let atoms = atoms
        .into_iter()
        .map(|mut b| {
            b.sort_unstable();
            b
        })
        .collect();
    Ok(FiniteMeasurableSpace { points, atoms, atom_of })
}

impl FiniteMeasurableSpace {
    /// Points `0..n` labeled by their index, every point its own atom.
    pub fn discrete(n: usize) -> Result<Self> {
        build_space(
            (0..n).map(|i| i.to_string()).collect(),
            (0..n).map(|i| vec![i]).collect(),
        )
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn atoms(&self) -> &[Vec<usize>] {
        &self.atoms
    }

    pub fn atom_of(&self, point: usize) -> usize {
        self.atom_of[point]
    }

    pub fn point_index(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|p| p == label)
    }

    pub fn whole(&self) -> AtomSet {
        AtomSet::full(self.num_atoms())
    }

    /// The atom set whose union is exactly `points`.
    pub fn measurable_set(&self, points: &[usize]) -> Result<AtomSet> {
        let mut mark = vec![false; self.num_points()];
        for &p in points {
            if p >= self.num_points() {
                return Err(Error::OutOfRange {
                    value: p,
                    bound: self.num_points(),
                });
            }
            mark[p] = true;
        }
        let mut set = AtomSet::EMPTY;
        for &p in points {
            let a = self.atom_of[p];
            if let Some(&q) = self.atoms[a].iter().find(|&&q| !mark[q]) {
                return Err(Error::NotMeasurable(format!(
                    "contains {} but not {} from the same atom",
                    self.points[p], self.points[q]
                )));
            }
            set = set.with(a);
        }
        Ok(set)
    }

    pub fn points_of(&self, set: AtomSet) -> Vec<usize> {
        let mut pts: Vec<usize> = set.iter().flat_map(|a| self.atoms[a].iter().copied()).collect();
        pts.sort_unstable();
        pts
    }

    pub fn atom_label(&self, a: usize) -> String {
        let labels: Vec<&str> = self.atoms[a].iter().map(|&p| self.points[p].as_str()).collect();
        format!("{{{}}}", labels.join(","))
    }

    pub fn set_label(&self, set: AtomSet) -> String {
        let labels: Vec<&str> = self
            .points_of(set)
            .into_iter()
            .map(|p| self.points[p].as_str())
            .collect();
        format!("{{{}}}", labels.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionViolation {
    Shape(String),
    Unit { point: usize },
    Homomorphism { s: usize, t: usize, point: usize },
    NotMeasurable { s: usize, atom: usize },
}

impl fmt::Display for ActionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionViolation::Shape(m) => write!(f, "shape: {m}"),
            ActionViolation::Unit { point } => write!(f, "unit moves point {point}"),
            ActionViolation::Homomorphism { s, t, point } => {
                write!(
                    f,
                    "action({s}·{t}) differs from action({s})∘action({t}) at point {point}"
                )
            }
            ActionViolation::NotMeasurable { s, atom } => {
                write!(f, "pullback of atom {atom} under {s} is not measurable")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ActionReport {
    pub violations: Vec<ActionViolation>,
}

impl ActionReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_action(
    space: &FiniteMeasurableSpace,
    monoid: &InverseMonoidTable,
    action: &[Vec<usize>],
) -> ActionReport {
    let n = space.num_points();
    let mut violations = Vec::new();
    if action.len() != monoid.order() {
        violations.push(ActionViolation::Shape(format!(
            "{} maps for a monoid of order {}",
            action.len(),
            monoid.order()
        )));
        return ActionReport { violations };
    }
    for (s, map) in action.iter().enumerate() {
        if map.len() != n || map.iter().any(|&y| y >= n) {
            violations.push(ActionViolation::Shape(format!(
                "map of element {s} is not a total function on {n} points"
            )));
        }
    }
    if !violations.is_empty() {
        return ActionReport { violations };
    }
    for x in 0..n {
        if action[monoid.unit()][x] != x {
            violations.push(ActionViolation::Unit { point: x });
        }
    }
    for s in monoid.elements() {
        for t in monoid.elements() {
            let st = monoid.mul(s, t);
            if let Some(x) = (0..n).find(|&x| action[st][x] != action[s][action[t][x]]) {
                violations.push(ActionViolation::Homomorphism { s, t, point: x });
            }
        }
    }
    for s in monoid.elements() {
        for a in 0..space.num_atoms() {
            let pre: Vec<usize> = (0..n).filter(|&x| space.atom_of(action[s][x]) == a).collect();
            if space.measurable_set(&pre).is_err() {
                violations.push(ActionViolation::NotMeasurable { s, atom: a });
            }
        }
    }
    ActionReport { violations }
}

/// A finite measurable space with a validated inverse-monoid action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatSpace {
    space: FiniteMeasurableSpace,
    monoid: InverseMonoidTable,
    action: Vec<Vec<usize>>,
    atom_pullback: Vec<Vec<AtomSet>>,
}

impl StatSpace {
    pub fn new(space: FiniteMeasurableSpace, monoid: InverseMonoidTable, action: Vec<Vec<usize>>) -> Result<Self> {
        let report = validate_action(&space, &monoid, &action);
        if !report.is_valid() {
            return Err(Error::InvalidAction(
                report
                    .violations
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            ));
        }
        let atom_pullback = (0..monoid.order())
            .map(|s| {
                let mut pb = vec![AtomSet::EMPTY; space.num_atoms()];
                for (a, block) in space.atoms().iter().enumerate() {
                    let image = space.atom_of(action[s][block[0]]);
                    pb[image] = pb[image].with(a);
                }
                pb
            })
            .collect();
        Ok(Self {
            space,
            monoid,
            action,
            atom_pullback,
        })
    }

    /// Closes total point maps under composition and validates the result
    /// as an inverse monoid.
    pub fn from_generators(space: FiniteMeasurableSpace, generators: &[Vec<usize>], cap: usize) -> Result<Self> {
        let (table, maps) = transformation_closure(space.num_points(), generators, cap)?;
        let monoid = InverseMonoidTable::new(table)?;
        Self::new(space, monoid, maps)
    }

    pub fn space(&self) -> &FiniteMeasurableSpace {
        &self.space
    }

    pub fn monoid(&self) -> &InverseMonoidTable {
        &self.monoid
    }

    pub fn action(&self, s: usize) -> &[usize] {
        &self.action[s]
    }

    pub fn num_atoms(&self) -> usize {
        self.space.num_atoms()
    }

    pub fn whole(&self) -> AtomSet {
        self.space.whole()
    }

    pub fn pullback_atom(&self, s: usize, a: usize) -> AtomSet {
        self.atom_pullback[s][a]
    }

    pub fn pullback(&self, s: usize, set: AtomSet) -> AtomSet {
        set.iter()
            .fold(AtomSet::EMPTY, |acc, a| acc.union(self.atom_pullback[s][a]))
    }

    /// Pullback of an arbitrary point set, failing when it is not measurable.
    pub fn pullback_points(&self, s: usize, points: &[usize]) -> Result<AtomSet> {
        let set = self.space.measurable_set(points)?;
        Ok(self.pullback(s, set))
    }

    /// All measurable sets, in bitmask order.
    pub fn measurable_sets(&self) -> impl Iterator<Item = AtomSet> {
        self.whole().subsets()
    }
}

/// Closure of total maps on `0..carrier` under composition, identity first.
/// `mul[i][j]` is the index of `maps[i] ∘ maps[j]`.
pub fn transformation_closure(
    carrier: usize,
    generators: &[Vec<usize>],
    cap: usize,
) -> Result<(MonoidTable, Vec<Vec<usize>>)> {
    for g in generators {
        if g.len() != carrier {
            return Err(Error::DimensionMismatch {
                expected: carrier,
                found: g.len(),
            });
        }
        if let Some(&y) = g.iter().find(|&&y| y >= carrier) {
            return Err(Error::OutOfRange {
                value: y,
                bound: carrier,
            });
        }
    }
    let mut maps: Vec<Vec<usize>> = vec![(0..carrier).collect()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    index.insert(maps[0].clone(), 0);
    for g in generators {
        if !index.contains_key(g) {
            index.insert(g.clone(), maps.len());
            maps.push(g.clone());
        }
    }
    let mut k = 0;
    while k < maps.len() {
        for g in generators {
            for prod in [compose_maps(&maps[k], g), compose_maps(g, &maps[k])] {
                if !index.contains_key(&prod) {
                    if maps.len() >= cap {
                        return Err(Error::ClosureExplosion { count: maps.len(), cap });
                    }
                    index.insert(prod.clone(), maps.len());
                    maps.push(prod);
                }
            }
        }
        k += 1;
    }
    let n = maps.len();
    let mut mul = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            mul[i][j] = index[&compose_maps(&maps[i], &maps[j])];
        }
    }
    let labels = (0..n)
        .map(|i| if i == 0 { "1".to_string() } else { format!("m{i}") })
        .collect();
    Ok((
        MonoidTable {
            order: n,
            unit: 0,
            mul,
            labels,
        },
        maps,
    ))
}

/// `g ∘ f` for total maps.
pub fn compose_maps(g: &[usize], f: &[usize]) -> Vec<usize> {
    f.iter().map(|&y| g[y]).collect()
}

/// Attaches the one-element group acting trivially.
pub fn with_trivial_symmetry(space: FiniteMeasurableSpace) -> StatSpace {
    let id: Vec<usize> = (0..space.num_points()).collect();
    StatSpace::new(space, InverseMonoidTable::trivial(), vec![id]).expect("trivial action is always valid")
}

/// A morphism of stationarily measurable spaces: a measurable point map
/// `f: source → target` with a monoid homomorphism `f_star` from the target
/// monoid to the source monoid.
#[derive(Clone, Debug)]
pub struct StatMorphism {
    pub source: Arc<StatSpace>,
    pub target: Arc<StatSpace>,
    pub f: Vec<usize>,
    pub f_star: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismViolation {
    Shape(String),
    NotMeasurable { target_atom: usize },
    UnitNotPreserved,
    NotHomomorphism { t1: usize, t2: usize },
    Pullback { t: usize, target_atom: usize },
}

impl fmt::Display for MorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismViolation::Shape(m) => write!(f, "shape: {m}"),
            MorphismViolation::NotMeasurable { target_atom } => {
                write!(f, "preimage of target atom {target_atom} is not measurable")
            }
            MorphismViolation::UnitNotPreserved => write!(f, "f_star does not preserve the unit"),
            MorphismViolation::NotHomomorphism { t1, t2 } => {
                write!(f, "f_star({t1}·{t2}) ≠ f_star({t1})·f_star({t2})")
            }
            MorphismViolation::Pullback { t, target_atom } => {
                write!(f, "pullback equation fails for t = {t}, B = atom {target_atom}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MorphismReport {
    pub violations: Vec<MorphismViolation>,
}

impl MorphismReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl StatMorphism {
    /// Preimage of a target atom set, or `None` if some preimage is not
    /// measurable.
    pub fn try_preimage(&self, set: AtomSet) -> Option<AtomSet> {
        let src = self.source.space();
        let tgt = self.target.space();
        let pts: Vec<usize> = (0..src.num_points())
            .filter(|&x| set.contains(tgt.atom_of(self.f[x])))
            .collect();
        src.measurable_set(&pts).ok()
    }

    pub fn preimage(&self, set: AtomSet) -> Result<AtomSet> {
        self.try_preimage(set)
            .ok_or_else(|| Error::InvalidMorphism("preimage is not measurable".into()))
    }
}

pub fn validate_morphism(m: &StatMorphism) -> MorphismReport {
    let mut violations = Vec::new();
    let (src, tgt) = (&m.source, &m.target);
    if m.f.len() != src.space().num_points() || m.f.iter().any(|&y| y >= tgt.space().num_points()) {
        violations.push(MorphismViolation::Shape("f is not a total point map".into()));
    }
    if m.f_star.len() != tgt.monoid().order() || m.f_star.iter().any(|&s| s >= src.monoid().order()) {
        violations.push(MorphismViolation::Shape(
            "f_star is not a map from target monoid to source monoid".into(),
        ));
    }
    if !violations.is_empty() {
        return MorphismReport { violations };
    }
    let mut atom_pre = Vec::new();
    for b in 0..tgt.num_atoms() {
        match m.try_preimage(AtomSet::singleton(b)) {
            Some(p) => atom_pre.push(p),
            None => {
                violations.push(MorphismViolation::NotMeasurable { target_atom: b });
                atom_pre.push(AtomSet::EMPTY);
            }
        }
    }
    let (tm, sm) = (tgt.monoid(), src.monoid());
    if m.f_star[tm.unit()] != sm.unit() {
        violations.push(MorphismViolation::UnitNotPreserved);
    }
    for t1 in tm.elements() {
        for t2 in tm.elements() {
            if m.f_star[tm.mul(t1, t2)] != sm.mul(m.f_star[t1], m.f_star[t2]) {
                violations.push(MorphismViolation::NotHomomorphism { t1, t2 });
            }
        }
    }
    if !violations.is_empty() {
        return MorphismReport { violations };
    }
    let pre = |set: AtomSet| set.iter().fold(AtomSet::EMPTY, |acc, b| acc.union(atom_pre[b]));
    for t in tm.elements() {
        for b in 0..tgt.num_atoms() {
            let lhs = pre(tgt.pullback_atom(t, b));
            let rhs = src.pullback(m.f_star[t], atom_pre[b]);
            if lhs != rhs {
                violations.push(MorphismViolation::Pullback { t, target_atom: b });
            }
        }
    }
    MorphismReport { violations }
}

pub fn identity_morphism(space: Arc<StatSpace>) -> StatMorphism {
    StatMorphism {
        f: (0..space.space().num_points()).collect(),
        f_star: space.monoid().elements().collect(),
        source: space.clone(),
        target: space,
    }
}

fn same_space(a: &Arc<StatSpace>, b: &Arc<StatSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// `m2 ∘ m1`; requires `m1.target = m2.source`.
pub fn compose_morphisms(m2: &StatMorphism, m1: &StatMorphism) -> Result<StatMorphism> {
    if !same_space(&m1.target, &m2.source) {
        return Err(Error::EndpointMismatch);
    }
    Ok(StatMorphism {
        source: m1.source.clone(),
        target: m2.target.clone(),
        f: compose_maps(&m2.f, &m1.f),
        f_star: compose_maps(&m1.f_star, &m2.f_star),
    })
}

/// Every point map `X → Y` whose atom preimages are measurable.
pub fn enumerate_measurable_maps(x: &FiniteMeasurableSpace, y: &FiniteMeasurableSpace) -> Vec<Vec<usize>> {
    let (nx, ny) = (x.num_points(), y.num_points());
    let mut out = Vec::new();
    let mut f = vec![0; nx];
    loop {
        let ok = (0..y.num_atoms()).all(|b| {
            let pts: Vec<usize> = (0..nx).filter(|&p| y.atom_of(f[p]) == b).collect();
            x.measurable_set(&pts).is_ok()
        });
        if ok {
            out.push(f.clone());
        }
        let mut i = 0;
        while i < nx {
            f[i] += 1;
            if f[i] < ny {
                break;
            }
            f[i] = 0;
            i += 1;
        }
        if i == nx {
            return out;
        }
    }
}

/// Every unit-preserving monoid homomorphism `from → to`, by brute force.
pub fn enumerate_monoid_homs(from: &InverseMonoidTable, to: &InverseMonoidTable) -> Vec<Vec<usize>> {
    let (n, m) = (from.order(), to.order());
    let mut out = Vec::new();
    let mut h = vec![0; n];
    loop {
        let ok = h[from.unit()] == to.unit()
            && from
                .elements()
                .all(|a| from.elements().all(|b| h[from.mul(a, b)] == to.mul(h[a], h[b])));
        if ok {
            out.push(h.clone());
        }
        let mut i = 0;
        while i < n {
            h[i] += 1;
            if h[i] < m {
                break;
            }
            h[i] = 0;
            i += 1;
        }
        if i == n {
            return out;
        }
    }
}

/// Every valid morphism `source → target`.
pub fn enumerate_morphisms(source: &Arc<StatSpace>, target: &Arc<StatSpace>) -> Vec<StatMorphism> {
    let maps = enumerate_measurable_maps(source.space(), target.space());
    let homs = enumerate_monoid_homs(target.monoid(), source.monoid());
    let mut out = Vec::new();
    for f in &maps {
        for h in &homs {
            let m = StatMorphism {
                source: source.clone(),
                target: target.clone(),
                f: f.clone(),
                f_star: h.clone(),
            };
            if validate_morphism(&m).is_valid() {
                out.push(m);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inverse_semigroup::MonoidTable;

    fn parity() -> StatSpace {
        let space = FiniteMeasurableSpace::discrete(4).unwrap();
        StatSpace::from_generators(space, &[vec![2, 1, 0, 3], vec![0, 3, 2, 1]], 100).unwrap()
    }

    fn collapse() -> StatSpace {
        let space = FiniteMeasurableSpace::discrete(2).unwrap();
        StatSpace::from_generators(space, &[vec![0, 0]], 100).unwrap()
    }

    #[test]
    fn atom_set_subsets() {
        let s = AtomSet::from_atoms([0, 2]);
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs, vec![AtomSet(0), AtomSet(1), AtomSet(4), AtomSet(5)]);
        assert_eq!(AtomSet::full(4).subsets().count(), 16);
        assert_eq!(AtomSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn build_space_examples() {
        let s = build_space(vec!["0".into()], vec![vec![0]]).unwrap();
        assert_eq!(s.num_atoms(), 1);
        let p = FiniteMeasurableSpace::discrete(4).unwrap();
        assert_eq!(p.num_atoms(), 4);
        let err = build_space(vec!["0".into(), "1".into()], vec![vec![0, 1], vec![1]]);
        assert!(matches!(err, Err(Error::NotPartition(m)) if m.contains("overlap")));
        assert!(build_space(vec!["0".into(), "1".into()], vec![vec![0]]).is_err());
        assert!(build_space(vec!["0".into()], vec![vec![0], vec![]]).is_err());
    }

    #[test]
    fn measurability() {
        let s = build_space(vec!["a".into(), "b".into(), "c".into()], vec![vec![0, 1], vec![2]]).unwrap();
        assert_eq!(s.measurable_set(&[0, 1]).unwrap(), AtomSet(1));
        assert!(matches!(s.measurable_set(&[0]), Err(Error::NotMeasurable(_))));
        assert_eq!(s.points_of(AtomSet(3)), vec![0, 1, 2]);
    }

    #[test]
    fn validate_action_examples() {
        let p = parity();
        assert_eq!(p.monoid().order(), 4);
        assert!(p.monoid().is_group());
        let c = collapse();
        assert_eq!(c.monoid().order(), 2);

        let bad_table = MonoidTable {
            order: 2,
            unit: 0,
            mul: vec![vec![0, 1], vec![1, 0]],
            labels: vec![],
        };
        let report = validate_action(
            c.space(),
            &InverseMonoidTable::new(bad_table).unwrap(),
            &[vec![0, 1], vec![0, 0]],
        );
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, ActionViolation::Homomorphism { .. })));
    }

    #[test]
    fn non_measurable_action_is_reported() {
        let space = build_space(vec!["0".into(), "1".into(), "2".into()], vec![vec![0, 1], vec![2]]).unwrap();
        // swapping 1 and 2 splits the first atom
        let (table, maps) = transformation_closure(3, &[vec![0, 2, 1]], 10).unwrap();
        let monoid = InverseMonoidTable::new(table).unwrap();
        let r = validate_action(&space, &monoid, &maps);
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, ActionViolation::NotMeasurable { .. })));
    }

    #[test]
    fn pullback_examples() {
        let c = collapse();
        let unit = c.monoid().unit();
        let e = 1 - unit;
        assert_eq!(c.pullback(unit, AtomSet(1)), AtomSet(1));
        assert_eq!(c.pullback(e, AtomSet::singleton(0)), AtomSet(0b11));
        assert_eq!(c.pullback(e, AtomSet::singleton(1)), AtomSet::EMPTY);
    }

    #[test]
    fn pullback_composes_contravariantly() {
        for sp in [parity(), collapse()] {
            let m = sp.monoid();
            for s in m.elements() {
                for t in m.elements() {
                    for a in sp.measurable_sets() {
                        assert_eq!(sp.pullback(m.mul(s, t), a), sp.pullback(t, sp.pullback(s, a)));
                    }
                }
            }
        }
    }

    fn two_point() -> Arc<StatSpace> {
        Arc::new(with_trivial_symmetry(
            build_space(vec!["even".into(), "odd".into()], vec![vec![0], vec![1]]).unwrap(),
        ))
    }

    fn one_point() -> Arc<StatSpace> {
        Arc::new(with_trivial_symmetry(FiniteMeasurableSpace::discrete(1).unwrap()))
    }

    #[test]
    fn morphism_examples() {
        let p = Arc::new(parity());
        let id = identity_morphism(p.clone());
        assert!(validate_morphism(&id).is_valid());

        let m = StatMorphism {
            source: p.clone(),
            target: two_point(),
            f: vec![0, 1, 0, 1],
            f_star: vec![0],
        };
        assert!(validate_morphism(&m).is_valid());

        // a 2-point target with a swap, pulled back along g1 which fixes parity
        let swap2 = Arc::new(
            StatSpace::from_generators(
                build_space(vec!["even".into(), "odd".into()], vec![vec![0], vec![1]]).unwrap(),
                &[vec![1, 0]],
                10,
            )
            .unwrap(),
        );
        let g1 = (0..4).find(|&s| p.action(s) == [2, 1, 0, 3]).unwrap();
        let bad = StatMorphism {
            source: p.clone(),
            target: swap2,
            f: vec![0, 1, 0, 1],
            f_star: vec![0, g1],
        };
        let r = validate_morphism(&bad);
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, MorphismViolation::Pullback { t: 1, .. })));
    }

    #[test]
    fn composition_examples() {
        let p = Arc::new(parity());
        let two = two_point();
        let one = one_point();
        let m1 = StatMorphism {
            source: p.clone(),
            target: two.clone(),
            f: vec![0, 1, 0, 1],
            f_star: vec![0],
        };
        let m2 = StatMorphism {
            source: two.clone(),
            target: one.clone(),
            f: vec![0, 0],
            f_star: vec![0],
        };
        let c = compose_morphisms(&m2, &m1).unwrap();
        assert_eq!(c.f, vec![0, 0, 0, 0]);
        assert!(validate_morphism(&c).is_valid());
        let again = compose_morphisms(&identity_morphism(one.clone()), &c).unwrap();
        assert_eq!(again.f, c.f);
        assert_eq!(again.f_star, c.f_star);
        assert!(matches!(compose_morphisms(&m1, &m2), Err(Error::EndpointMismatch)));
    }

    #[test]
    fn trivial_symmetry_hom_counts() {
        let d2 = FiniteMeasurableSpace::discrete(2).unwrap();
        let maps = enumerate_measurable_maps(&d2, &d2);
        assert_eq!(maps.len(), 4);
        let src = Arc::new(with_trivial_symmetry(d2.clone()));
        let tgt = Arc::new(with_trivial_symmetry(d2.clone()));
        assert_eq!(enumerate_morphisms(&src, &tgt).len(), 4);

        // an indiscrete target admits every map
        let coarse = build_space(vec!["0".into(), "1".into()], vec![vec![0, 1]]).unwrap();
        assert_eq!(enumerate_measurable_maps(&d2, &coarse).len(), 4);
        // the discrete target forces measurability
        assert_eq!(enumerate_measurable_maps(&coarse, &d2).len(), 2);

        // trivialized source, swap target: f_star is forced and f must be
        // invariant, which a 2-point swap never allows
        let swap = Arc::new(StatSpace::from_generators(d2, &[vec![1, 0]], 10).unwrap());
        assert!(enumerate_morphisms(&src, &swap).is_empty());
        assert_eq!(enumerate_monoid_homs(swap.monoid(), src.monoid()).len(), 1);
    }

    #[test]
    fn transformation_closure_rejects_non_inverse() {
        // constant maps onto distinct points: idempotents fail to commute
        let space = FiniteMeasurableSpace::discrete(2).unwrap();
        let err = StatSpace::from_generators(space, &[vec![0, 0], vec![1, 1]], 10);
        assert!(matches!(err, Err(Error::InvalidTable(_))));
    }
}
