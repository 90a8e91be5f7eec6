//! Regular languages of reduced words in the free group on `a, b`, with
//! left translation by group elements.
//!
//! Letters are written `a, A, b, B` with `A = a⁻¹`, `B = b⁻¹`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

pub const LETTERS: [char; 4] = ['a', 'A', 'b', 'B'];

/// Letter index `0..4`; `x ^ 1` is the inverse letter.
pub type Letter = u8;

pub fn letter_of(c: char) -> Result<Letter> {
    LETTERS
        .iter()
        .position(|&l| l == c)
        .map(|i| i as Letter)
        .ok_or_else(|| Error::Malformed(format!("'{c}' is not one of a, A, b, B")))
}

pub fn inverse_letter(x: Letter) -> Letter {
    x ^ 1
}

/// A word of the free group, kept reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    /// Parses `a, A, b, B` letters; `ε` or the empty string is the identity.
    /// Errors unless the word is already reduced.
    pub fn parse(s: &str) -> Result<Self> {
        let letters: Vec<Letter> = s.chars().filter(|&c| c != 'ε').map(letter_of).collect::<Result<_>>()?;
        let w = Self(letters);
        if !w.is_reduced() {
            return Err(Error::Malformed(format!("'{s}' is not reduced")));
        }
        Ok(w)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[1] != inverse_letter(p[0]))
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|&x| inverse_letter(x)).collect())
    }

    /// Reduced product `self · other`.
    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &x in &other.0 {
            if out.last() == Some(&inverse_letter(x)) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        Word(out)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for &x in &self.0 {
            write!(f, "{}", LETTERS[x as usize])?;
        }
        Ok(())
    }
}

/// All reduced words of length at most `max_len`, shortest first.
pub fn reduced_words(max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    let mut frontier = vec![Word::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for x in 0..4 {
                if w.0.last() != Some(&inverse_letter(x)) {
                    let mut v = w.0.clone();
                    v.push(x);
                    next.push(Word(v));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// A complete deterministic automaton over the four letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Dfa {
    delta: Vec<[usize; 4]>,
    accept: Vec<bool>,
    start: usize,
}

impl Dfa {
    fn accepts(&self, w: &[Letter]) -> bool {
        let mut q = self.start;
        for &x in w {
            q = self.delta[q][x as usize];
        }
        self.accept[q]
    }

    /// States: 0 = start, 1 + x = last letter x, 5 = dead.
    fn reduced() -> Self {
        let mut delta = vec![[0; 4]; 6];
        for (q, row) in delta.iter_mut().enumerate() {
            for x in 0..4u8 {
                row[x as usize] = if q == 5 || (q >= 1 && (q - 1) as u8 == inverse_letter(x)) {
                    5
                } else {
                    1 + x as usize
                };
            }
        }
        Self {
            delta,
            accept: vec![true, true, true, true, true, false],
            start: 0,
        }
    }

    fn product(&self, other: &Dfa, op: impl Fn(bool, bool) -> bool) -> Dfa {
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(self.start, other.start)];
        index.insert(pairs[0], 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            let mut row = [0; 4];
            for x in 0..4 {
                let next = (self.delta[p][x], other.delta[q][x]);
                row[x] = *index.entry(next).or_insert_with(|| {
                    pairs.push(next);
                    pairs.len() - 1
                });
            }
            delta.push(row);
            i += 1;
        }
        let accept = pairs
            .iter()
            .map(|&(p, q)| op(self.accept[p], other.accept[q]))
            .collect();
        Dfa {
            delta,
            accept,
            start: 0,
        }
    }

    /// Minimal automaton with states numbered in breadth-first order from
    /// the start, so equal languages give equal values.
    fn minimize(&self) -> Dfa {
        // reachable part
        let mut order = vec![self.start];
        let mut seen: BTreeMap<usize, usize> = BTreeMap::from([(self.start, 0)]);
        let mut i = 0;
        while i < order.len() {
            for x in 0..4 {
                let t = self.delta[order[i]][x];
                if let std::collections::btree_map::Entry::Vacant(slot) = seen.entry(t) {
                    slot.insert(order.len());
                    order.push(t);
                }
            }
            i += 1;
        }
        // Moore refinement
        let mut class: Vec<usize> = order.iter().map(|&q| self.accept[q] as usize).collect();
        loop {
            let mut sig_index: HashMap<(usize, [usize; 4]), usize> = HashMap::new();
            let next: Vec<usize> = order
                .iter()
                .enumerate()
                .map(|(k, &q)| {
                    let mut row = [0; 4];
                    for x in 0..4 {
                        row[x] = class[seen[&self.delta[q][x]]];
                    }
                    let n = sig_index.len();
                    *sig_index.entry((class[k], row)).or_insert(n)
                })
                .collect();
            let stable = sig_index.len() == class.iter().collect::<std::collections::HashSet<_>>().len();
            class = next;
            if stable {
                break;
            }
        }
        // canonical numbering
        let mut canon: HashMap<usize, usize> = HashMap::new();
        let mut reps = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        canon.insert(class[0], 0);
        reps.push(0usize);
        while let Some(k) = queue.pop_front() {
            for x in 0..4 {
                let t = seen[&self.delta[order[k]][x]];
                if let std::collections::hash_map::Entry::Vacant(slot) = canon.entry(class[t]) {
                    slot.insert(reps.len());
                    reps.push(t);
                    queue.push_back(t);
                }
            }
        }
        let delta = reps
            .iter()
            .map(|&k| {
                let mut row = [0; 4];
                for x in 0..4 {
                    row[x] = canon[&class[seen[&self.delta[order[k]][x]]]];
                }
                row
            })
            .collect();
        let accept = reps.iter().map(|&k| self.accept[order[k]]).collect();
        Dfa {
            delta,
            accept,
            start: 0,
        }
    }
}

/// A regular set of reduced words, stored as its minimal automaton.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReducedWordDfa {
    dfa: Dfa,
}

impl ReducedWordDfa {
    fn canonical(dfa: &Dfa) -> Self {
        Self {
            dfa: dfa.product(&Dfa::reduced(), |a, b| a && b).minimize(),
        }
    }

    pub fn empty() -> Self {
        Self::canonical(&Dfa {
            delta: vec![[0; 4]],
            accept: vec![false],
            start: 0,
        })
    }

    /// The whole free group.
    pub fn all() -> Self {
        Self::canonical(&Dfa::reduced())
    }

    pub fn singleton(w: &Word) -> Self {
        Self::from_words(std::slice::from_ref(w))
    }

    pub fn from_words(words: &[Word]) -> Self {
        words.iter().fold(Self::empty(), |acc, w| {
            // chain automaton for one word
            let k = w.len();
            let dead = k + 1;
            let mut delta = vec![[dead; 4]; k + 2];
            for (i, &x) in w.0.iter().enumerate() {
                delta[i][x as usize] = i + 1;
            }
            let mut accept = vec![false; k + 2];
            accept[k] = true;
            acc.union(&Self::canonical(&Dfa {
                delta,
                accept,
                start: 0,
            }))
        })
    }

    /// `W(x)`: reduced words beginning with `x`.
    pub fn first_letter(x: Letter) -> Self {
        let mut delta = vec![[2; 4]; 3];
        delta[0][x as usize] = 1;
        delta[1] = [1; 4];
        Self::canonical(&Dfa {
            delta,
            accept: vec![false, true, false],
            start: 0,
        })
    }

    /// Compiles a regular expression over `a, A, b, B` with `|`, `*`, `+`,
    /// `?`, parentheses and `ε`; non-reduced words are dropped.
    pub fn from_regex(src: &str) -> Result<Self> {
        let ast = regex::parse(src)?;
        Ok(Self::canonical(&regex::compile(&ast)))
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.dfa.accepts(&w.0)
    }

    pub fn num_states(&self) -> usize {
        self.dfa.delta.len()
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        Self::canonical(&self.dfa.product(&other.dfa, op))
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a || b)
    }

    pub fn inter(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && b)
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Self {
        Self::all().minus(self)
    }

    pub fn is_empty(&self) -> bool {
        !self.dfa.accept.iter().any(|&a| a)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.inter(other).is_empty()
    }

    /// Words `u` with `x·u ∈ L` as concatenation.
    fn residual(&self, x: Letter) -> Self {
        Self::canonical(&Dfa {
            start: self.dfa.delta[self.dfa.start][x as usize],
            ..self.dfa.clone()
        })
    }

    /// Concatenation `x·L`, for words of `L` not starting with `x⁻¹`.
    fn prepend(&self, x: Letter) -> Self {
        let n = self.dfa.delta.len();
        let mut delta = self.dfa.delta.clone();
        let dead = n + 1;
        let mut row = [dead; 4];
        row[x as usize] = self.dfa.start;
        delta.push(row);
        delta.push([dead; 4]);
        let mut accept = self.dfa.accept.clone();
        accept.extend([false, false]);
        Self::canonical(&Dfa {
            delta,
            accept,
            start: n,
        })
    }

    /// `{x·u : u ∈ L}` reduced: words not starting with `x⁻¹` gain `x`,
    /// words starting with `x⁻¹` lose it.
    fn translate_letter(&self, x: Letter) -> Self {
        let kept = self.minus(&Self::first_letter(inverse_letter(x))).prepend(x);
        kept.union(&self.residual(inverse_letter(x)))
    }

    /// `w·L`.
    pub fn left_translate(&self, w: &Word) -> Result<Self> {
        if !w.is_reduced() {
            return Err(Error::Malformed(format!("{w} is not reduced")));
        }
        Ok(w.0.iter().rev().fold(self.clone(), |l, &x| l.translate_letter(x)))
    }

    /// Members of length at most `max_len`.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        reduced_words(max_len)
            .into_iter()
            .filter(|w| self.contains(w))
            .collect()
    }
}

impl fmt::Display for ReducedWordDfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sample: Vec<String> = self.words_up_to(2).iter().map(|w| w.to_string()).collect();
        write!(f, "<{} states; {{{}, …}}>", self.num_states(), sample.join(", "))
    }
}

mod regex {
    //! Thompson construction and subset construction.

    use super::{letter_of, Dfa, Letter};
    use crate::error::{Error, Result};
    use std::collections::{BTreeSet, HashMap};

    #[derive(Debug)]
    pub enum Ast {
        Empty,
        Letter(Letter),
        Concat(Vec<Ast>),
        Alt(Vec<Ast>),
        Star(Box<Ast>),
    }

    pub fn parse(src: &str) -> Result<Ast> {
        let chars: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let ast = alt(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(Error::Malformed(format!(
                "unexpected '{}' at {pos} in regex",
                chars[pos]
            )));
        }
        Ok(ast)
    }

    fn alt(c: &[char], pos: &mut usize) -> Result<Ast> {
        let mut arms = vec![concat(c, pos)?];
        while c.get(*pos) == Some(&'|') {
            *pos += 1;
            arms.push(concat(c, pos)?);
        }
        Ok(if arms.len() == 1 {
            arms.pop().expect("one arm")
        } else {
            Ast::Alt(arms)
        })
    }

    fn concat(c: &[char], pos: &mut usize) -> Result<Ast> {
        let mut items = Vec::new();
        while let Some(&ch) = c.get(*pos) {
            if ch == '|' || ch == ')' {
                break;
            }
            let mut atom = match ch {
                '(' => {
                    *pos += 1;
                    let inner = alt(c, pos)?;
                    if c.get(*pos) != Some(&')') {
                        return Err(Error::Malformed("unbalanced '(' in regex".into()));
                    }
                    *pos += 1;
                    inner
                }
                'ε' => {
                    *pos += 1;
                    Ast::Empty
                }
                _ => {
                    *pos += 1;
                    Ast::Letter(letter_of(ch)?)
                }
            };
            while let Some(&op) = c.get(*pos) {
                atom = match op {
                    '*' => Ast::Star(Box::new(atom)),
                    '+' => {
                        let again = clone(&atom);
                        Ast::Concat(vec![atom, Ast::Star(Box::new(again))])
                    }
                    '?' => Ast::Alt(vec![atom, Ast::Empty]),
                    _ => break,
                };
                *pos += 1;
            }
            items.push(atom);
        }
        Ok(match items.len() {
            0 => Ast::Empty,
            1 => items.pop().expect("one item"),
            _ => Ast::Concat(items),
        })
    }

    fn clone(a: &Ast) -> Ast {
        match a {
            Ast::Empty => Ast::Empty,
            Ast::Letter(x) => Ast::Letter(*x),
            Ast::Concat(v) => Ast::Concat(v.iter().map(clone).collect()),
            Ast::Alt(v) => Ast::Alt(v.iter().map(clone).collect()),
            Ast::Star(b) => Ast::Star(Box::new(clone(b))),
        }
    }

    #[derive(Default)]
    struct Nfa {
        eps: Vec<Vec<usize>>,
        edges: Vec<Vec<(Letter, usize)>>,
    }

    impl Nfa {
        fn state(&mut self) -> usize {
            self.eps.push(Vec::new());
            self.edges.push(Vec::new());
            self.eps.len() - 1
        }

        /// Returns (entry, exit).
        fn build(&mut self, a: &Ast) -> (usize, usize) {
            match a {
                Ast::Empty => {
                    let s = self.state();
                    (s, s)
                }
                Ast::Letter(x) => {
                    let (s, t) = (self.state(), self.state());
                    self.edges[s].push((*x, t));
                    (s, t)
                }
                Ast::Concat(items) => {
                    let s = self.state();
                    let mut cur = s;
                    for it in items {
                        let (i, o) = self.build(it);
                        self.eps[cur].push(i);
                        cur = o;
                    }
                    (s, cur)
                }
                Ast::Alt(arms) => {
                    let (s, t) = (self.state(), self.state());
                    for arm in arms {
                        let (i, o) = self.build(arm);
                        self.eps[s].push(i);
                        self.eps[o].push(t);
                    }
                    (s, t)
                }
                Ast::Star(inner) => {
                    let s = self.state();
                    let (i, o) = self.build(inner);
                    self.eps[s].push(i);
                    self.eps[o].push(s);
                    (s, s)
                }
            }
        }

        fn closure(&self, set: &mut BTreeSet<usize>) {
            let mut stack: Vec<usize> = set.iter().copied().collect();
            while let Some(q) = stack.pop() {
                for &t in &self.eps[q] {
                    if set.insert(t) {
                        stack.push(t);
                    }
                }
            }
        }
    }

    pub fn compile(a: &Ast) -> Dfa {
        let mut nfa = Nfa::default();
        let (entry, exit) = nfa.build(a);
        let mut start = BTreeSet::from([entry]);
        nfa.closure(&mut start);
        let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::from([(start.clone(), 0)]);
        let mut sets = vec![start];
        let mut delta = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            let mut row = [0; 4];
            for x in 0..4u8 {
                let mut next: BTreeSet<usize> = sets[i]
                    .iter()
                    .flat_map(|&q| nfa.edges[q].iter().filter(|e| e.0 == x).map(|e| e.1))
                    .collect();
                nfa.closure(&mut next);
                row[x as usize] = *index.entry(next.clone()).or_insert_with(|| {
                    sets.push(next);
                    sets.len() - 1
                });
            }
            delta.push(row);
            i += 1;
        }
        let accept = sets.iter().map(|s| s.contains(&exit)).collect();
        Dfa {
            delta,
            accept,
            start: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn first_letter_partition() {
        let mut u = ReducedWordDfa::singleton(&Word::identity());
        for x in 0..4 {
            u = u.union(&ReducedWordDfa::first_letter(x));
        }
        assert_eq!(u, ReducedWordDfa::all());
        assert!(ReducedWordDfa::first_letter(0).is_disjoint(&ReducedWordDfa::first_letter(2)));
        assert_eq!(ReducedWordDfa::empty().complement(), ReducedWordDfa::all());
    }

    #[test]
    fn translation_identities() {
        let wa = ReducedWordDfa::first_letter(0);
        let w_a_inv = ReducedWordDfa::first_letter(1);
        assert_eq!(w_a_inv.left_translate(&w("a")).unwrap(), wa.complement());
        assert_eq!(wa.left_translate(&Word::identity()).unwrap(), wa);
        let l = ReducedWordDfa::from_regex("(ab)*B|A+").unwrap();
        let g = w("abA");
        assert_eq!(l.left_translate(&g).unwrap().left_translate(&g.inverse()).unwrap(), l);
        assert!(Word::parse("aA").is_err());
        assert!(ReducedWordDfa::from_regex("a(b").is_err());
    }

    #[test]
    fn regex_semantics() {
        let d = ReducedWordDfa::from_regex("A*").unwrap();
        assert!(d.contains(&Word::identity()) && d.contains(&w("AAA")) && !d.contains(&w("a")));
        // non-reduced words are dropped
        let l = ReducedWordDfa::from_regex("aA|b").unwrap();
        assert_eq!(l, ReducedWordDfa::singleton(&w("b")));
        assert_eq!(
            ReducedWordDfa::from_regex("a(a|A|b|B)*").unwrap(),
            ReducedWordDfa::first_letter(0)
        );
    }

    /// Random languages: random complete automata cut down to reduced words.
    fn arb_language() -> impl Strategy<Value = ReducedWordDfa> {
        (1usize..5).prop_flat_map(|k| {
            (
                proptest::collection::vec(proptest::array::uniform4(0..k), k),
                proptest::collection::vec(any::<bool>(), k),
            )
                .prop_map(|(delta, accept)| {
                    ReducedWordDfa::canonical(&Dfa {
                        delta,
                        accept,
                        start: 0,
                    })
                })
        })
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        proptest::collection::vec(0u8..4, 0..5).prop_map(|v| Word::identity().mul(&Word(v)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn left_translate_matches_words(l in arb_language(), g in arb_word()) {
            let t = l.left_translate(&g).unwrap();
            let back = g.inverse();
            for v in reduced_words(6) {
                prop_assert_eq!(t.contains(&v), l.contains(&back.mul(&v)), "{} in {}·L", v, g);
            }
        }

        #[test]
        fn boolean_algebra(a in arb_language(), b in arb_language(), c in arb_language(), g in arb_word()) {
            prop_assert_eq!(a.union(&b).union(&c), a.union(&b.union(&c)));
            prop_assert_eq!(a.union(&b).complement(), a.complement().inter(&b.complement()));
            prop_assert_eq!(a.union(&b).left_translate(&g).unwrap(), a.left_translate(&g).unwrap().union(&b.left_translate(&g).unwrap()));
            prop_assert_eq!(a.complement().left_translate(&g).unwrap(), a.left_translate(&g).unwrap().complement());
        }
    }
}
