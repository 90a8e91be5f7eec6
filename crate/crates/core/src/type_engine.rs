//! The coproduct completion Ā, equidecomposability and the type monoid.
//!
//! An element of Ā is a multiplicity vector over the atoms with values in
//! `ℕ ∪ {ω}`. Equidecomposability of finite parts is the congruence
//! generated by the atomic moves `[a] ≡ [s⁻¹a]`: preimages preserve disjoint
//! unions, so the moves of arbitrary measurable sets split into atomic ones,
//! and a pair with two movers `s⁻¹P = t⁻¹Q` factors through the common image
//! by transitivity.
//!
//! ω-supports are handled by closing them: an atom joins the closure of a set
//! `C` of ω-atoms once some member of the class of `0` modulo `C` contains
//! it, i.e. once `[b] ⪯ k·χ_C` for some bounded `k`. The result `D` also
//! contains every atom whose pullbacks all land in `D`, so the measure that
//! is `0` on `D` and `∞` elsewhere is stationary; hence no atom outside `D`
//! lies below `ω·χ_C` and the closure is exact.
//!
//! Negative answers come with invariants: signed conserved functionals on
//! elements with a common ω-closure, stationary `ℝ̄⁺`-valued measures found
//! by exact linear programming, or an exhaustively enumerated class.
//!
//! Elements whose ω-supports lie in a pullback-stable `C` are compared in
//! the presentation where the atoms of `C` are set to zero. The class there
//! is an invariant of countable equidecomposability (all but finitely many
//! pieces live inside `C`, and `C` is stable under pullbacks), and rewriting
//! paths lift to one-step realizations because the ω-copies of `C` absorb
//! whatever a move produces inside `C`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::congruence::{self, Meet, PathStep, Presentation, Rule, State};
use crate::error::{Error, Result};
use crate::linalg::{extreme_rays, kernel_on, primitive, to_i64_vec};
use crate::lp::{exact_lp_feasible, LinearSystem, Relation};
use crate::statmeas::{validate_morphism, AtomSet, StatMorphism, StatSpace};

/// Coordinates above which extreme rays are not enumerated.
pub const MAX_RAY_ATOMS: usize = 16;

/// A formal countable coproduct of measurable sets.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbarElement {
    finite: Vec<u32>,
    omega: AtomSet,
}

impl AbarElement {
    /// Builds an element, letting ω absorb finite multiplicities.
    pub fn from_parts(mut finite: Vec<u32>, omega: AtomSet) -> Self {
        for a in omega.iter() {
            if a < finite.len() {
                finite[a] = 0;
            }
        }
        Self { finite, omega }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_parts(vec![0; n], AtomSet::EMPTY)
    }

    pub fn of_set(n: usize, set: AtomSet) -> Self {
        Self::from_parts(atom_vector(n, set), AtomSet::EMPTY)
    }

    pub fn atom(n: usize, a: usize) -> Self {
        Self::of_set(n, AtomSet::singleton(a))
    }

    /// Countably many copies of each atom of `set`.
    pub fn omega_of(n: usize, set: AtomSet) -> Self {
        Self::from_parts(vec![0; n], set)
    }

    pub fn finite(&self) -> &[u32] {
        &self.finite
    }

    pub fn omega(&self) -> AtomSet {
        self.omega
    }

    pub fn num_atoms(&self) -> usize {
        self.finite.len()
    }

    pub fn is_zero(&self) -> bool {
        self.omega.is_empty() && self.finite.iter().all(|&m| m == 0)
    }

    pub fn is_finite(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn support(&self) -> AtomSet {
        congruence::support(&self.finite).union(self.omega)
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.finite.iter().map(|&m| m as u64).sum()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.num_atoms() != other.num_atoms() {
            return Err(Error::SpaceMismatch);
        }
        let finite = self
            .finite
            .iter()
            .zip(&other.finite)
            .map(|(a, b)| a.saturating_add(*b))
            .collect();
        Ok(Self::from_parts(finite, self.omega.union(other.omega)))
    }

    pub fn scale(&self, k: u32) -> Self {
        if k == 0 {
            return Self::zero(self.num_atoms());
        }
        Self::from_parts(self.finite.iter().map(|m| m.saturating_mul(k)).collect(), self.omega)
    }

    /// The countable-fold sum `ω·P`.
    pub fn omega_multiple(&self) -> Self {
        Self::omega_of(self.num_atoms(), self.support())
    }

    /// Componentwise `self ≥ other`, with ω above every finite value.
    pub fn dominates(&self, other: &Self) -> bool {
        other.omega.is_subset(self.omega)
            && (0..self.num_atoms()).all(|a| self.omega.contains(a) || self.finite[a] >= other.finite[a])
    }

    /// Saturating evaluation of a functional; `None` stands for `+∞`.
    /// Negative weights on ω-atoms are treated as zero weight, callers only
    /// use signed functionals that vanish on the ω-support.
    pub fn evaluate(&self, y: &[i64]) -> Option<i128> {
        if self.omega.iter().any(|a| y[a] > 0) {
            return None;
        }
        Some(crate::linalg::dot(y, &self.finite))
    }

    pub fn render(&self, space: &StatSpace) -> String {
        let mut parts = Vec::new();
        for (a, &m) in self.finite.iter().enumerate() {
            if m == 1 {
                parts.push(space.space().atom_label(a));
            } else if m > 1 {
                parts.push(format!("{m}·{}", space.space().atom_label(a)));
            }
        }
        for a in self.omega.iter() {
            parts.push(format!("ω·{}", space.space().atom_label(a)));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Debug for AbarElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.finite)?;
        if !self.omega.is_empty() {
            write!(f, "+ω{:?}", self.omega)?;
        }
        Ok(())
    }
}

pub fn atom_vector(n: usize, set: AtomSet) -> Vec<u32> {
    (0..n).map(|a| set.contains(a) as u32).collect()
}

pub fn abar_of_set(space: &StatSpace, set: AtomSet) -> Result<AbarElement> {
    if !set.is_subset(space.whole()) {
        return Err(Error::NotMeasurable(format!("{set:?} names atoms outside the space")));
    }
    Ok(AbarElement::of_set(space.num_atoms(), set))
}

pub fn abar_coproduct(p: &AbarElement, q: &AbarElement) -> Result<AbarElement> {
    p.add(q)
}

/// Componentwise pullback `s⁻¹P`.
pub fn abar_act(space: &StatSpace, s: usize, p: &AbarElement) -> AbarElement {
    let n = space.num_atoms();
    let mut finite = vec![0u32; n];
    for (a, &m) in p.finite.iter().enumerate() {
        if m > 0 {
            for b in space.pullback_atom(s, a).iter() {
                finite[b] = finite[b].saturating_add(m);
            }
        }
    }
    AbarElement::from_parts(finite, space.pullback(s, p.omega))
}

/// The atomic move `[atom] ≡ [mover⁻¹ atom]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MoveRelation {
    pub atom: usize,
    pub mover: usize,
    pub rhs: AtomSet,
}

impl MoveRelation {
    pub fn lhs(&self) -> AtomSet {
        AtomSet::singleton(self.atom)
    }

    pub fn is_trivial(&self) -> bool {
        self.rhs == self.lhs()
    }

    /// `lhs − rhs` as an integer row.
    pub fn difference(&self, n: usize) -> Vec<i64> {
        (0..n)
            .map(|b| (b == self.atom) as i64 - self.rhs.contains(b) as i64)
            .collect()
    }
}

/// Every atomic move, one per atom and monoid element.
pub fn relation_basis(space: &StatSpace) -> Vec<MoveRelation> {
    let mut out = Vec::new();
    for s in space.monoid().elements() {
        for atom in 0..space.num_atoms() {
            out.push(MoveRelation {
                atom,
                mover: s,
                rhs: space.pullback_atom(s, atom),
            });
        }
    }
    out
}

/// Rational functionals annihilating every relation difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConservedFunctionals {
    /// Integer basis of the kernel.
    pub basis: Vec<Vec<i64>>,
    /// Extreme rays of the nonnegative part, when enumerated.
    pub rays: Option<Vec<Vec<i64>>>,
}

pub fn conserved_functionals(relations: &[MoveRelation], n: usize) -> ConservedFunctionals {
    let rows: Vec<Vec<i64>> = relations
        .iter()
        .filter(|r| !r.is_trivial())
        .map(|r| r.difference(n))
        .collect();
    let all: Vec<usize> = (0..n).collect();
    let basis = kernel_on(&rows, n, &all)
        .iter()
        .map(|v| to_i64_vec(v).expect("kernel entries fit in i64"))
        .collect();
    ConservedFunctionals {
        basis,
        rays: extreme_rays(&rows, n, MAX_RAY_ATOMS),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Move {
    pub s: usize,
    pub t: usize,
}

/// Pieces `P = ∐ left`, `Q = ∐ right` with `s⁻¹ left_j = t⁻¹ right_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub left: Vec<AbarElement>,
    pub right: Vec<AbarElement>,
    pub moves: Vec<Move>,
}

fn coproduct_all(n: usize, pieces: &[AbarElement]) -> Result<AbarElement> {
    pieces.iter().try_fold(AbarElement::zero(n), |acc, p| acc.add(p))
}

pub fn verify_realization(space: &StatSpace, p: &AbarElement, q: &AbarElement, cert: &Realization) -> Result<bool> {
    let n = space.num_atoms();
    if cert.left.len() != cert.right.len() || cert.left.len() != cert.moves.len() {
        return Err(Error::Malformed("pieces and moves differ in number".into()));
    }
    let order = space.monoid().order();
    if cert.moves.iter().any(|m| m.s >= order || m.t >= order) {
        return Err(Error::Malformed("mover outside the monoid".into()));
    }
    if p.num_atoms() != n || q.num_atoms() != n || cert.left.iter().chain(&cert.right).any(|x| x.num_atoms() != n) {
        return Err(Error::SpaceMismatch);
    }
    if coproduct_all(n, &cert.left)? != *p || coproduct_all(n, &cert.right)? != *q {
        return Ok(false);
    }
    Ok(cert
        .left
        .iter()
        .zip(&cert.right)
        .zip(&cert.moves)
        .all(|((l, r), m)| abar_act(space, m.s, l) == abar_act(space, m.t, r)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainStep {
    /// A realization whose left side is the previous element.
    Move { realization: Realization, to: AbarElement },
    /// Passage to or from the ω-normal form.
    Absorb { to: AbarElement },
}

/// A chain of elements, consecutive ones equidecomposable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub start: AbarElement,
    pub steps: Vec<ChainStep>,
}

impl Chain {
    pub fn trivial(p: AbarElement) -> Self {
        Self {
            start: p,
            steps: Vec::new(),
        }
    }

    pub fn end(&self) -> &AbarElement {
        match self.steps.last() {
            None => &self.start,
            Some(ChainStep::Move { to, .. }) | Some(ChainStep::Absorb { to }) => to,
        }
    }

    pub fn moves(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s, ChainStep::Move { .. }))
            .count()
    }

    fn absorb(&mut self, to: AbarElement) {
        if *self.end() != to {
            self.steps.push(ChainStep::Absorb { to });
        }
    }
}

/// A stationary measure with values in `ℝ̄⁺`: integers off `infinite`, `∞`
/// on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureWitness {
    pub values: Vec<i64>,
    pub infinite: AtomSet,
}

impl MeasureWitness {
    /// Countably additive value; `None` stands for `∞`.
    pub fn measure(&self, p: &AbarElement) -> Option<i128> {
        if !p.support().is_disjoint(self.infinite) || p.omega().iter().any(|a| self.values[a] > 0) {
            return None;
        }
        Some(crate::linalg::dot(&self.values, p.finite()))
    }

    pub fn is_stationary(&self, relations: &[MoveRelation]) -> bool {
        self.values.iter().all(|&v| v >= 0)
            && self.infinite.iter().all(|a| self.values[a] == 0)
            && relations.iter().all(|r| {
                let hits = !r.rhs.is_disjoint(self.infinite);
                if self.infinite.contains(r.atom) {
                    hits
                } else {
                    !hits && self.values[r.atom] == r.rhs.iter().map(|b| self.values[b]).sum::<i64>()
                }
            })
    }
}

/// `a > b` in `ℝ̄⁺`, `None` being `∞`.
fn exceeds(a: Option<i128>, b: Option<i128>) -> bool {
    match (a, b) {
        (None, Some(_)) => true,
        (Some(x), Some(y)) => x > y,
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Verdict {
    Equal,
    NotEqual,
    Leq,
    NotLeq,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Chain(Chain),
    /// `γ` together with a chain `α + γ ⇝ β`.
    Dominated {
        gamma: AbarElement,
        chain: Chain,
    },
    /// A signed conserved functional vanishing on the pullback-stable set
    /// `vanishing_on`, which holds both ω-supports, and separating the inputs.
    Functional {
        y: Vec<i64>,
        vanishing_on: AtomSet,
    },
    /// A stationary measure separating the inputs.
    Measure(MeasureWitness),
    /// The whole class of `class_of` modulo `modulo` was enumerated under
    /// coordinate cap `cap` without reaching the other side. For order
    /// decisions `escapes` shows that no `ω·[d]` with `d ∉ modulo` fits
    /// below the larger side.
    ClosedClass {
        modulo: AtomSet,
        class_of: Vec<u32>,
        cap: u32,
        size: usize,
        escapes: Vec<(usize, MeasureWitness)>,
    },
    Exhausted {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub verdict: Verdict,
    pub witness: Witness,
}

impl Decision {
    fn new(verdict: Verdict, witness: Witness) -> Self {
        Self { verdict, witness }
    }

    fn unknown(reason: impl Into<String>) -> Self {
        Self::new(Verdict::Unknown, Witness::Exhausted { reason: reason.into() })
    }

    pub fn is_definite(&self) -> bool {
        self.verdict != Verdict::Unknown
    }

    /// `Some(true)` for Equal/Leq, `Some(false)` for the negatives.
    pub fn holds(&self) -> Option<bool> {
        match self.verdict {
            Verdict::Equal | Verdict::Leq => Some(true),
            Verdict::NotEqual | Verdict::NotLeq => Some(false),
            Verdict::Unknown => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Coordinate cap for rewriting; `None` picks the default
    /// `total input multiplicity + 4 × max relation norm × atoms`.
    pub coord_cap: Option<u32>,
    pub max_states: usize,
    /// Multiplier bounding the search for `[b] ⪯ k·χ_C` during ω-closure.
    pub omega_k: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            coord_cap: None,
            max_states: 200_000,
            omega_k: 8,
        }
    }
}

/// Closure of an ω-support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub inside: AtomSet,
}

type MemoKey = (AbarElement, AbarElement, bool);

/// Atom sets `I` with `a ∈ I ⟺ s⁻¹a ∩ I ≠ ∅` for every move, by size.
/// Above [`MAX_RAY_ATOMS`] atoms only the empty set is listed.
pub fn stable_sets(relations: &[MoveRelation], n: usize) -> Vec<AtomSet> {
    if n > MAX_RAY_ATOMS {
        return vec![AtomSet::EMPTY];
    }
    let mut out: Vec<AtomSet> = AtomSet::full(n)
        .subsets()
        .filter(|&i| relations.iter().all(|r| i.contains(r.atom) == !r.rhs.is_disjoint(i)))
        .collect();
    out.sort_by_key(|s| (s.len(), s.0));
    out
}

/// Decision procedures for one space.
pub struct TypeEngine {
    space: Arc<StatSpace>,
    relations: Vec<MoveRelation>,
    functionals: ConservedFunctionals,
    diff_rows: Vec<Vec<i64>>,
    max_norm: u32,
    stable_sets: Vec<AtomSet>,
    budget: Budget,
    closures: Mutex<HashMap<AtomSet, Arc<Closure>>>,
    presentations: Mutex<HashMap<AtomSet, Arc<Presentation>>>,
    kernels: Mutex<HashMap<AtomSet, Arc<Vec<Vec<i64>>>>>,
    memo: Mutex<HashMap<MemoKey, Decision>>,
}

impl fmt::Debug for TypeEngine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TypeEngine")
            .field("atoms", &self.space.num_atoms())
            .field("relations", &self.relations.len())
            .field("budget", &self.budget)
            .finish()
    }
}

/// An equidecomposability class, kept in ω-normal form.
#[derive(Clone, Debug)]
pub struct TarskiType {
    space: Arc<StatSpace>,
    rep: AbarElement,
}

impl TarskiType {
    pub fn representative(&self) -> &AbarElement {
        &self.rep
    }

    pub fn space(&self) -> &Arc<StatSpace> {
        &self.space
    }
}

fn unit_row(n: usize, a: usize) -> Vec<i64> {
    (0..n).map(|b| (a == b) as i64).collect()
}

fn same_space(a: &Arc<StatSpace>, b: &Arc<StatSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl TypeEngine {
    pub fn new(space: Arc<StatSpace>) -> Self {
        Self::with_budget(space, Budget::default())
    }

    pub fn with_budget(space: Arc<StatSpace>, budget: Budget) -> Self {
        let n = space.num_atoms();
        let mut relations: Vec<MoveRelation> = Vec::new();
        for r in relation_basis(&space) {
            if !r.is_trivial() && !relations.iter().any(|x| x.atom == r.atom && x.rhs == r.rhs) {
                relations.push(r);
            }
        }
        let functionals = conserved_functionals(&relations, n);
        let diff_rows = relations.iter().map(|r| r.difference(n)).collect();
        let max_norm = relations.iter().map(|r| r.rhs.len().max(1) as u32).max().unwrap_or(1);
        let stable_sets = stable_sets(&relations, n);
        Self {
            space,
            relations,
            functionals,
            diff_rows,
            max_norm,
            stable_sets,
            budget,
            closures: Mutex::new(HashMap::new()),
            presentations: Mutex::new(HashMap::new()),
            kernels: Mutex::new(HashMap::new()),
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn space(&self) -> &Arc<StatSpace> {
        &self.space
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn num_atoms(&self) -> usize {
        self.space.num_atoms()
    }

    /// The deduplicated nontrivial atomic moves.
    pub fn relations(&self) -> &[MoveRelation] {
        &self.relations
    }

    pub fn functionals(&self) -> &ConservedFunctionals {
        &self.functionals
    }

    /// The presentation with the atoms of `c` set to zero.
    pub fn presentation(&self, c: AtomSet) -> Arc<Presentation> {
        if let Some(p) = self.presentations.lock().unwrap().get(&c) {
            return p.clone();
        }
        let mut pres = Presentation {
            n: self.num_atoms(),
            rules: Vec::new(),
        };
        for (i, r) in self.relations.iter().enumerate() {
            let lhs = if c.contains(r.atom) { AtomSet::EMPTY } else { r.lhs() };
            pres.push(Rule {
                lhs,
                rhs: r.rhs.minus(c),
                relation: i,
            });
        }
        let pres = Arc::new(pres);
        self.presentations.lock().unwrap().insert(c, pres.clone());
        pres
    }

    /// Kernel basis of functionals vanishing on `c`.
    fn kernel_vanishing(&self, c: AtomSet) -> Arc<Vec<Vec<i64>>> {
        if let Some(k) = self.kernels.lock().unwrap().get(&c) {
            return k.clone();
        }
        let n = self.num_atoms();
        let support: Vec<usize> = (0..n).filter(|&a| !c.contains(a)).collect();
        let basis: Vec<Vec<i64>> = kernel_on(&self.diff_rows, n, &support)
            .iter()
            .filter_map(|v| to_i64_vec(v))
            .collect();
        let k = Arc::new(basis);
        self.kernels.lock().unwrap().insert(c, k.clone());
        k
    }

    /// True when every pullback of an atom of `c` stays inside `c`.
    pub fn is_pullback_stable(&self, c: AtomSet) -> bool {
        self.relations.iter().all(|r| !c.contains(r.atom) || r.rhs.is_subset(c))
    }

    pub fn closure(&self, w: AtomSet) -> Arc<Closure> {
        if let Some(c) = self.closures.lock().unwrap().get(&w) {
            return c.clone();
        }
        let n = self.num_atoms();
        let zero = vec![0u32; n];
        let cap = self.budget.omega_k.saturating_mul(self.max_norm).max(1);
        let mut inside = w;
        loop {
            let pres = self.presentation(inside);
            let found = congruence::search(&pres, &zero, cap, self.budget.max_states, |x| x.iter().any(|&m| m > 0));
            let grown = match &found.found {
                Some(path) => {
                    let last = path.last().map(|p| p.to.clone()).unwrap_or_default();
                    inside.union(congruence::support(&last))
                }
                None => inside,
            };
            if grown == inside {
                break;
            }
            inside = grown;
        }
        let c = Arc::new(Closure { inside });
        self.closures.lock().unwrap().insert(w, c.clone());
        c
    }

    /// Sets `I` on which a stationary measure may be infinite.
    pub fn stable_sets(&self) -> &[AtomSet] {
        &self.stable_sets
    }

    /// Stationarity constraints for a measure infinite exactly on `inf`.
    pub fn stationary_system(&self, inf: AtomSet) -> LinearSystem {
        let n = self.num_atoms();
        let mut sys = LinearSystem::nonnegative(n);
        for a in inf.iter() {
            sys.add_int(&unit_row(n, a), Relation::Eq, 0);
        }
        for r in self.relations.iter().filter(|r| !inf.contains(r.atom)) {
            sys.add_int(&r.difference(n), Relation::Eq, 0);
        }
        sys
    }

    fn solve_measure(&self, sys: &LinearSystem, inf: AtomSet) -> Option<MeasureWitness> {
        let x = exact_lp_feasible(sys).point()?.to_vec();
        let values = to_i64_vec(&primitive(&x))?;
        Some(MeasureWitness { values, infinite: inf })
    }

    /// A stationary measure finite on `small` and strictly larger on `big`.
    pub fn separating_measure(&self, small: &AbarElement, big: &AbarElement) -> Option<MeasureWitness> {
        let n = self.num_atoms();
        for &inf in &self.stable_sets {
            if !inf.is_disjoint(small.support()) {
                continue;
            }
            if !inf.is_disjoint(big.support()) {
                return Some(MeasureWitness {
                    values: vec![0; n],
                    infinite: inf,
                });
            }
            let mut sys = self.stationary_system(inf);
            for a in small.omega().iter() {
                sys.add_int(&unit_row(n, a), Relation::Eq, 0);
            }
            let gap: Vec<i64> = (0..n)
                .map(|a| big.finite()[a] as i64 - small.finite()[a] as i64)
                .collect();
            let mut lin = sys.clone();
            lin.add_int(&gap, Relation::Ge, 1);
            if let Some(w) = self.solve_measure(&lin, inf) {
                return Some(w);
            }
            for d in big.omega().iter() {
                let mut one = sys.clone();
                one.add_int(&unit_row(n, d), Relation::Ge, 1);
                if let Some(w) = self.solve_measure(&one, inf) {
                    return Some(w);
                }
            }
        }
        None
    }

    /// ω-normal form: closed ω-support, finite part zero on it.
    pub fn omega_normalize(&self, p: &AbarElement) -> AbarElement {
        let c = self.closure(p.omega);
        AbarElement::from_parts(p.finite.clone(), c.inside)
    }

    fn default_cap(&self, total: u64) -> u32 {
        self.budget.coord_cap.unwrap_or_else(|| {
            let extra = 4 * self.max_norm as u64 * self.num_atoms() as u64;
            (total + extra).min(u32::MAX as u64) as u32
        })
    }

    fn check(&self, p: &AbarElement) -> Result<()> {
        if p.num_atoms() != self.num_atoms() {
            Err(Error::SpaceMismatch)
        } else {
            Ok(())
        }
    }

    /// Lifts a rewriting step modulo `c` to a one-step realization.
    fn lift(&self, pres: &Presentation, c: AtomSet, ps: &PathStep) -> ChainStep {
        let n = self.num_atoms();
        let rule = pres.rules[ps.step.rule];
        let rel = self.relations[rule.relation];
        let unit = self.space.monoid().unit();
        let (atom_side, r_side) = if ps.step.forward {
            (&ps.from, &ps.to)
        } else {
            (&ps.to, &ps.from)
        };
        let _ = r_side;
        let mut rest = atom_side.clone();
        for a in rule.lhs.iter() {
            rest[a] -= 1;
        }
        let rest = AbarElement::from_parts(rest, c);
        let atom_piece = AbarElement::atom(n, rel.atom);
        let image_piece = AbarElement::of_set(n, rel.rhs);
        let mut left = vec![atom_piece];
        let mut right = vec![image_piece];
        let mut moves = vec![Move { s: rel.mover, t: unit }];
        if !ps.step.forward {
            std::mem::swap(&mut left, &mut right);
            moves[0] = Move { s: unit, t: rel.mover };
        }
        if !rest.is_zero() {
            left.push(rest.clone());
            right.push(rest);
            moves.push(Move { s: unit, t: unit });
        }
        ChainStep::Move {
            realization: Realization { left, right, moves },
            to: AbarElement::from_parts(ps.to.clone(), c),
        }
    }

    fn lift_path(&self, pres: &Presentation, c: AtomSet, chain: &mut Chain, path: &[PathStep]) {
        for ps in path {
            chain.steps.push(self.lift(pres, c, ps));
        }
    }

    fn reduced(p: &AbarElement, c: AtomSet) -> State {
        AbarElement::from_parts(p.finite.clone(), c).finite
    }

    pub fn decide_equal(&self, p: &AbarElement, q: &AbarElement) -> Result<Decision> {
        self.check(p)?;
        self.check(q)?;
        let key = (p.clone(), q.clone(), true);
        if let Some(d) = self.memo.lock().unwrap().get(&key) {
            return Ok(d.clone());
        }
        let d = self.decide_equal_uncached(p, q);
        self.memo.lock().unwrap().insert(key, d.clone());
        Ok(d)
    }

    fn decide_equal_uncached(&self, p: &AbarElement, q: &AbarElement) -> Decision {
        if p == q {
            return Decision::new(Verdict::Equal, Witness::Chain(Chain::trivial(p.clone())));
        }
        let max_states = self.budget.max_states;
        if p.is_finite() && q.is_finite() {
            // exact finite realizations first, when they are cheap to find
            let pres = self.presentation(AtomSet::EMPTY);
            let cap = self.default_cap(p.total_multiplicity() + q.total_multiplicity());
            let quick = (max_states / 20).max(1_000);
            if let Meet::Path(path) = congruence::connect(&pres, &p.finite, &q.finite, cap, quick) {
                let mut chain = Chain::trivial(p.clone());
                self.lift_path(&pres, AtomSet::EMPTY, &mut chain, &path);
                return Decision::new(Verdict::Equal, Witness::Chain(chain));
            }
        }
        let cp = self.closure(p.omega);
        let cq = self.closure(q.omega);
        if cp.inside == cq.inside {
            return self.equal_modulo(p, q, cp.inside);
        }
        for (small, big) in [(q, p), (p, q)] {
            if let Some(w) = self.separating_measure(small, big) {
                return Decision::new(Verdict::NotEqual, Witness::Measure(w));
            }
        }
        let union = cp.inside.union(cq.inside);
        let d = self.equal_modulo(p, q, union);
        if d.verdict == Verdict::NotEqual {
            return d;
        }
        Decision::unknown(format!(
            "ω-closures {:?} and {:?} differ and no functional separates them",
            cp.inside, cq.inside
        ))
    }

    /// Compares in the presentation modulo a pullback-stable `c` containing
    /// both ω-supports. Positive answers assume `c` is absorbed by both.
    fn equal_modulo(&self, p: &AbarElement, q: &AbarElement, c: AtomSet) -> Decision {
        let u = Self::reduced(p, c);
        let v = Self::reduced(q, c);
        let pn = AbarElement::from_parts(u.clone(), c);
        let qn = AbarElement::from_parts(v.clone(), c);
        if u == v {
            let mut chain = Chain::trivial(p.clone());
            chain.absorb(pn);
            chain.absorb(q.clone());
            return Decision::new(Verdict::Equal, Witness::Chain(chain));
        }
        for y in self.kernel_vanishing(c).iter() {
            if crate::linalg::dot(y, &u) != crate::linalg::dot(y, &v) {
                return Decision::new(
                    Verdict::NotEqual,
                    Witness::Functional {
                        y: y.clone(),
                        vanishing_on: c,
                    },
                );
            }
        }
        let pres = self.presentation(c);
        let total = u.iter().chain(&v).map(|&m| m as u64).sum();
        let cap = self.default_cap(total);
        match congruence::connect(&pres, &u, &v, cap, self.budget.max_states) {
            Meet::Path(path) => {
                let mut chain = Chain::trivial(p.clone());
                chain.absorb(pn);
                self.lift_path(&pres, c, &mut chain, &path);
                debug_assert_eq!(*chain.end(), qn);
                chain.absorb(q.clone());
                Decision::new(Verdict::Equal, Witness::Chain(chain))
            }
            Meet::Exhausted { from_left, visited } => Decision::new(
                Verdict::NotEqual,
                Witness::ClosedClass {
                    modulo: c,
                    class_of: if from_left { u } else { v },
                    cap,
                    size: visited,
                    escapes: Vec::new(),
                },
            ),
            Meet::Budget { visited } => {
                Decision::unknown(format!("rewriting budget exhausted after {visited} states (cap {cap})"))
            }
        }
    }

    /// `α ⪯ β`: some member of the class of `β` dominates `α`.
    pub fn decide_leq(&self, alpha: &AbarElement, beta: &AbarElement) -> Result<Decision> {
        self.check(alpha)?;
        self.check(beta)?;
        let key = (alpha.clone(), beta.clone(), false);
        if let Some(d) = self.memo.lock().unwrap().get(&key) {
            return Ok(d.clone());
        }
        let d = self.decide_leq_uncached(alpha, beta);
        self.memo.lock().unwrap().insert(key, d.clone());
        Ok(d)
    }

    fn decide_leq_uncached(&self, alpha: &AbarElement, beta: &AbarElement) -> Decision {
        let n = self.num_atoms();
        if alpha.is_zero() {
            return Decision::new(
                Verdict::Leq,
                Witness::Dominated {
                    gamma: beta.clone(),
                    chain: Chain::trivial(beta.clone()),
                },
            );
        }
        if beta.dominates(alpha) {
            let gamma = AbarElement::from_parts(
                (0..n).map(|a| beta.finite[a].saturating_sub(alpha.finite[a])).collect(),
                beta.omega,
            );
            if let Ok(sum) = alpha.add(&gamma) {
                if sum == *beta {
                    return Decision::new(
                        Verdict::Leq,
                        Witness::Dominated {
                            gamma,
                            chain: Chain::trivial(sum),
                        },
                    );
                }
            }
        }
        let cb = self.closure(beta.omega);
        let c = cb.inside;
        let u = Self::reduced(alpha, c);
        let v = Self::reduced(beta, c);
        if let Some(w) = self.separating_measure(beta, alpha) {
            return Decision::new(Verdict::NotLeq, Witness::Measure(w));
        }
        if !alpha.omega.is_subset(c) {
            return Decision::unknown(format!(
                "ω-support of the smaller side is not known to lie in the closure {c:?}"
            ));
        }
        let pres = self.presentation(c);
        let total = u.iter().chain(&v).map(|&m| m as u64).sum();
        let cap = self.default_cap(total);
        let target = |w: &State| w.iter().zip(&u).all(|(a, b)| a >= b);
        let found = congruence::search(&pres, &v, cap, self.budget.max_states, target);
        match found.found {
            Some(path) => {
                let w = path.last().map(|p| p.to.clone()).unwrap_or_else(|| v.clone());
                let gamma = AbarElement::from_parts(w.iter().zip(&u).map(|(a, b)| a - b).collect(), c);
                let start = alpha.add(&gamma).expect("same space");
                let mut chain = Chain::trivial(start);
                let back: Vec<PathStep> = path
                    .iter()
                    .rev()
                    .map(|ps| PathStep {
                        from: ps.to.clone(),
                        step: ps.step.inverse(),
                        to: ps.from.clone(),
                    })
                    .collect();
                self.lift_path(&pres, c, &mut chain, &back);
                chain.absorb(beta.clone());
                Decision::new(Verdict::Leq, Witness::Dominated { gamma, chain })
            }
            None if found.exhausted => {
                let mut escapes = Vec::new();
                for d in self.space.whole().minus(c).iter() {
                    match self.separating_measure(beta, &AbarElement::omega_of(n, AtomSet::singleton(d))) {
                        Some(w) => escapes.push((d, w)),
                        None => {
                            return Decision::unknown(format!(
                                "class closed, but ω·{d} might fit below the larger side"
                            ))
                        }
                    }
                }
                Decision::new(
                    Verdict::NotLeq,
                    Witness::ClosedClass {
                        modulo: c,
                        class_of: v,
                        cap,
                        size: found.visited,
                        escapes,
                    },
                )
            }
            None => Decision::unknown(format!(
                "no dominating member found among {} states (cap {cap})",
                found.visited
            )),
        }
    }

    /// Checks a chain step by step.
    pub fn verify_chain(&self, chain: &Chain) -> Result<bool> {
        let mut cur = chain.start.clone();
        for step in &chain.steps {
            match step {
                ChainStep::Move { realization, to } => {
                    if !verify_realization(&self.space, &cur, to, realization)? {
                        return Ok(false);
                    }
                    cur = to.clone();
                }
                ChainStep::Absorb { to } => {
                    if self.omega_normalize(&cur) != *to && self.omega_normalize(to) != cur {
                        return Ok(false);
                    }
                    cur = to.clone();
                }
            }
        }
        Ok(true)
    }

    fn functional_is_conserved(&self, y: &[i64]) -> bool {
        y.len() == self.num_atoms()
            && self
                .diff_rows
                .iter()
                .all(|row| row.iter().zip(y).map(|(a, b)| a * b).sum::<i64>() == 0)
    }

    fn closed_class_holds(&self, modulo: AtomSet, class_of: &[u32], cap: u32, target: impl Fn(&State) -> bool) -> bool {
        if !self.is_pullback_stable(modulo) {
            return false;
        }
        let pres = self.presentation(modulo);
        let s = congruence::search(&pres, &class_of.to_vec(), cap, usize::MAX, target);
        s.exhausted && s.found.is_none()
    }

    fn audit_measure(&self, w: &MeasureWitness) -> std::result::Result<(), String> {
        if w.values.len() != self.num_atoms() {
            return Err("measure has the wrong number of atoms".into());
        }
        if !w.is_stationary(&self.relations) {
            return Err("measure is not stationary".into());
        }
        Ok(())
    }

    fn audit_functional(
        &self,
        y: &[i64],
        c: AtomSet,
        p: &AbarElement,
        q: &AbarElement,
    ) -> std::result::Result<(), String> {
        if !self.functional_is_conserved(y) {
            return Err("functional does not annihilate the relations".into());
        }
        if c.iter().any(|a| y[a] != 0) {
            return Err("functional does not vanish where claimed".into());
        }
        if !p.omega.union(q.omega).is_subset(c) || !self.is_pullback_stable(c) {
            return Err("signed functional used outside a stable ω-support".into());
        }
        if p.evaluate(y) == q.evaluate(y) {
            return Err("functional does not separate".into());
        }
        Ok(())
    }

    /// Re-verifies the witness of an equality decision from scratch.
    pub fn audit_equal(&self, p: &AbarElement, q: &AbarElement, d: &Decision) -> std::result::Result<(), String> {
        match (&d.verdict, &d.witness) {
            (Verdict::Equal, Witness::Chain(chain)) => {
                if chain.start != *p || chain.end() != q {
                    return Err("chain endpoints differ from the inputs".into());
                }
                match self.verify_chain(chain) {
                    Ok(true) => Ok(()),
                    _ => Err("chain does not replay".into()),
                }
            }
            (Verdict::NotEqual, Witness::Functional { y, vanishing_on }) => {
                self.audit_functional(y, *vanishing_on, p, q)
            }
            (Verdict::NotEqual, Witness::Measure(w)) => {
                self.audit_measure(w)?;
                if w.measure(p) == w.measure(q) {
                    return Err("measure does not separate".into());
                }
                Ok(())
            }
            (
                Verdict::NotEqual,
                Witness::ClosedClass {
                    modulo, class_of, cap, ..
                },
            ) => {
                let (u, v) = (Self::reduced(p, *modulo), Self::reduced(q, *modulo));
                let other = if *class_of == u { v } else { u };
                if !p.omega.union(q.omega).is_subset(*modulo) {
                    return Err("class taken modulo a set missing an ω-support".into());
                }
                if self.closed_class_holds(*modulo, class_of, *cap, |w| *w == other) {
                    Ok(())
                } else {
                    Err("class is not closed or reaches the other side".into())
                }
            }
            (Verdict::Unknown, _) => Ok(()),
            _ => Err("verdict and witness kinds disagree".into()),
        }
    }

    /// Re-verifies the witness of an order decision from scratch.
    pub fn audit_leq(&self, a: &AbarElement, b: &AbarElement, d: &Decision) -> std::result::Result<(), String> {
        match (&d.verdict, &d.witness) {
            (Verdict::Leq, Witness::Dominated { gamma, chain }) => {
                let start = a.add(gamma).map_err(|e| e.to_string())?;
                if chain.start != start || chain.end() != b {
                    return Err("chain endpoints differ from α + γ and β".into());
                }
                match self.verify_chain(chain) {
                    Ok(true) => Ok(()),
                    _ => Err("chain does not replay".into()),
                }
            }
            (Verdict::NotLeq, Witness::Measure(w)) => {
                self.audit_measure(w)?;
                if exceeds(w.measure(a), w.measure(b)) {
                    Ok(())
                } else {
                    Err("measure does not separate".into())
                }
            }
            (
                Verdict::NotLeq,
                Witness::ClosedClass {
                    modulo,
                    class_of,
                    cap,
                    escapes,
                    ..
                },
            ) => {
                let n = self.num_atoms();
                if !a.omega.union(b.omega).is_subset(*modulo) {
                    return Err("class taken modulo a set missing an ω-support".into());
                }
                if *class_of != Self::reduced(b, *modulo) {
                    return Err("enumerated class is not the class of β".into());
                }
                for d in self.space.whole().minus(*modulo).iter() {
                    let Some((_, w)) = escapes.iter().find(|(x, _)| *x == d) else {
                        return Err(format!("no escape measure for atom {d}"));
                    };
                    self.audit_measure(w)?;
                    let big = AbarElement::omega_of(n, AtomSet::singleton(d));
                    if !exceeds(w.measure(&big), w.measure(b)) {
                        return Err(format!("escape measure for atom {d} does not separate"));
                    }
                }
                let u = Self::reduced(a, *modulo);
                if self.closed_class_holds(*modulo, class_of, *cap, |w| w.iter().zip(&u).all(|(x, y)| x >= y)) {
                    Ok(())
                } else {
                    Err("class is not closed or dominates α".into())
                }
            }
            (Verdict::Unknown, _) => Ok(()),
            _ => Err("verdict and witness kinds disagree".into()),
        }
    }

    fn check_type(&self, t: &TarskiType) -> Result<()> {
        if same_space(&t.space, &self.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// The class of an element of Ā.
    pub fn type_of_element(&self, p: &AbarElement) -> Result<TarskiType> {
        self.check(p)?;
        Ok(TarskiType {
            space: self.space.clone(),
            rep: self.omega_normalize(p),
        })
    }

    /// The Tarski measure `m(A) = [A]`.
    pub fn type_of(&self, set: AtomSet) -> Result<TarskiType> {
        self.type_of_element(&abar_of_set(&self.space, set)?)
    }

    pub fn type_zero(&self) -> TarskiType {
        self.type_of_element(&AbarElement::zero(self.num_atoms()))
            .expect("zero lives in every space")
    }

    pub fn type_add(&self, a: &TarskiType, b: &TarskiType) -> Result<TarskiType> {
        self.check_type(a)?;
        self.check_type(b)?;
        self.type_of_element(&a.rep.add(&b.rep)?)
    }

    pub fn type_scale(&self, a: &TarskiType, k: u32) -> Result<TarskiType> {
        self.check_type(a)?;
        self.type_of_element(&a.rep.scale(k))
    }

    pub fn type_omega(&self, a: &TarskiType) -> Result<TarskiType> {
        self.check_type(a)?;
        self.type_of_element(&a.rep.omega_multiple())
    }

    pub fn type_equal(&self, a: &TarskiType, b: &TarskiType) -> Result<Decision> {
        self.check_type(a)?;
        self.check_type(b)?;
        self.decide_equal(&a.rep, &b.rep)
    }

    pub fn type_leq(&self, a: &TarskiType, b: &TarskiType) -> Result<Decision> {
        self.check_type(a)?;
        self.check_type(b)?;
        self.decide_leq(&a.rep, &b.rep)
    }

    pub fn render(&self, p: &AbarElement) -> String {
        p.render(&self.space)
    }
}

/// The induced map `𝒯f` from target types to source types.
#[derive(Clone, Debug)]
pub struct TypeMap {
    morphism: StatMorphism,
    atom_preimage: Vec<AtomSet>,
}

pub fn morphism_type_map(m: &StatMorphism) -> Result<TypeMap> {
    let report = validate_morphism(m);
    if !report.is_valid() {
        return Err(Error::InvalidMorphism(
            report
                .violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; "),
        ));
    }
    let atom_preimage = (0..m.target.num_atoms())
        .map(|b| m.preimage(AtomSet::singleton(b)))
        .collect::<Result<_>>()?;
    Ok(TypeMap {
        morphism: m.clone(),
        atom_preimage,
    })
}

impl TypeMap {
    pub fn morphism(&self) -> &StatMorphism {
        &self.morphism
    }

    /// Componentwise preimage of an element over the target.
    pub fn apply(&self, p: &AbarElement) -> Result<AbarElement> {
        if p.num_atoms() != self.atom_preimage.len() {
            return Err(Error::SpaceMismatch);
        }
        let n = self.morphism.source.num_atoms();
        let mut finite = vec![0u32; n];
        let mut omega = AtomSet::EMPTY;
        for (b, &m) in p.finite.iter().enumerate() {
            for a in self.atom_preimage[b].iter() {
                finite[a] = finite[a].saturating_add(m);
            }
        }
        for b in p.omega.iter() {
            omega = omega.union(self.atom_preimage[b]);
        }
        Ok(AbarElement::from_parts(finite, omega))
    }

    pub fn apply_type(&self, source: &TypeEngine, t: &TarskiType) -> Result<TarskiType> {
        if !same_space(&t.space, &self.morphism.target) || !same_space(source.space(), &self.morphism.source) {
            return Err(Error::SpaceMismatch);
        }
        source.type_of_element(&self.apply(&t.rep)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statmeas::{build_space, with_trivial_symmetry, FiniteMeasurableSpace};

    fn parity() -> Arc<StatSpace> {
        let space = FiniteMeasurableSpace::discrete(4).unwrap();
        Arc::new(StatSpace::from_generators(space, &[vec![2, 1, 0, 3], vec![0, 3, 2, 1]], 100).unwrap())
    }

    fn collapse() -> Arc<StatSpace> {
        let space = FiniteMeasurableSpace::discrete(2).unwrap();
        Arc::new(StatSpace::from_generators(space, &[vec![0, 0]], 100).unwrap())
    }

    fn el(v: &[u32]) -> AbarElement {
        AbarElement::from_parts(v.to_vec(), AtomSet::EMPTY)
    }

    fn g1(sp: &StatSpace) -> usize {
        sp.monoid().elements().find(|&s| sp.action(s) == [2, 1, 0, 3]).unwrap()
    }

    #[test]
    fn abar_basics() {
        let sp = parity();
        assert_eq!(abar_of_set(&sp, AtomSet::EMPTY).unwrap(), AbarElement::zero(4));
        assert_eq!(abar_of_set(&sp, AtomSet(0b11)).unwrap(), el(&[1, 1, 0, 0]));
        assert_eq!(abar_of_set(&sp, sp.whole()).unwrap(), el(&[1, 1, 1, 1]));
        let p = el(&[1, 0, 0, 0]);
        assert_eq!(abar_coproduct(&p, &AbarElement::zero(4)).unwrap(), p);
        assert_eq!(abar_coproduct(&p, &p).unwrap(), el(&[2, 0, 0, 0]));
        let w = AbarElement::omega_of(4, AtomSet::singleton(0));
        assert_eq!(abar_coproduct(&w, &p).unwrap(), w);
    }

    #[test]
    fn abar_act_examples() {
        let sp = parity();
        let p = el(&[0, 1, 2, 0]);
        assert_eq!(abar_act(&sp, sp.monoid().unit(), &p), p);
        assert_eq!(abar_act(&sp, g1(&sp), &el(&[2, 0, 0, 0])), el(&[0, 0, 2, 0]));
        let c = collapse();
        let e = 1 - c.monoid().unit();
        assert_eq!(abar_act(&c, e, &el(&[1, 0])), el(&[1, 1]));
    }

    #[test]
    fn relation_basis_examples() {
        let t = Arc::new(with_trivial_symmetry(FiniteMeasurableSpace::discrete(2).unwrap()));
        assert!(relation_basis(&t).iter().all(|r| r.is_trivial()));
        let c = collapse();
        let e = 1 - c.monoid().unit();
        let rels: Vec<_> = relation_basis(&c).into_iter().filter(|r| r.mover == e).collect();
        assert_eq!(rels[0].rhs, AtomSet(0b11));
        assert_eq!(rels[1].rhs, AtomSet::EMPTY);
        let p = parity();
        let rels = relation_basis(&p);
        assert!(rels.iter().any(|r| r.atom == 0 && r.rhs == AtomSet::singleton(2)));
        assert!(rels.iter().any(|r| r.atom == 1 && r.rhs == AtomSet::singleton(3)));
    }

    #[test]
    fn conserved_functional_examples() {
        let p = TypeEngine::new(parity());
        let f = p.functionals();
        assert_eq!(f.basis.len(), 2);
        let rays = f.rays.as_ref().unwrap();
        assert!(rays.contains(&vec![1, 0, 1, 0]));
        assert!(rays.contains(&vec![0, 1, 0, 1]));
        let c = TypeEngine::new(collapse());
        assert_eq!(c.functionals().basis, vec![vec![1, 0]]);
        let t = TypeEngine::new(Arc::new(with_trivial_symmetry(
            FiniteMeasurableSpace::discrete(3).unwrap(),
        )));
        assert_eq!(t.functionals().basis.len(), 3);
    }

    #[test]
    fn decide_equal_examples() {
        let e = TypeEngine::new(parity());
        let a = el(&[1, 0, 0, 0]);
        let d = e.decide_equal(&a, &a).unwrap();
        assert_eq!(d.verdict, Verdict::Equal);

        let d = e.decide_equal(&a, &el(&[0, 0, 1, 0])).unwrap();
        assert_eq!(d.verdict, Verdict::Equal);
        let Witness::Chain(chain) = &d.witness else { panic!() };
        assert_eq!(chain.moves(), 1);
        e.audit_equal(&a, &el(&[0, 0, 1, 0]), &d).unwrap();

        let d = e.decide_equal(&a, &el(&[0, 1, 0, 0])).unwrap();
        assert_eq!(d.verdict, Verdict::NotEqual);
        e.audit_equal(&a, &el(&[0, 1, 0, 0]), &d).unwrap();

        let c = TypeEngine::new(collapse());
        let d = c.decide_equal(&el(&[0, 1]), &el(&[0, 0])).unwrap();
        assert_eq!(d.verdict, Verdict::Equal);
        c.audit_equal(&el(&[0, 1]), &el(&[0, 0]), &d).unwrap();
    }

    #[test]
    fn decide_leq_examples() {
        let e = TypeEngine::new(parity());
        let d = e.decide_leq(&AbarElement::zero(4), &el(&[0, 1, 0, 0])).unwrap();
        assert_eq!(d.verdict, Verdict::Leq);
        let a = el(&[1, 0, 0, 0]);
        let b = el(&[1, 1, 0, 0]);
        let d = e.decide_leq(&a, &b).unwrap();
        assert_eq!(d.verdict, Verdict::Leq);
        let Witness::Dominated { gamma, .. } = &d.witness else {
            panic!()
        };
        assert_eq!(*gamma, el(&[0, 1, 0, 0]));
        e.audit_leq(&a, &b, &d).unwrap();

        let d = e.decide_leq(&el(&[1, 0, 1, 0]), &a).unwrap();
        assert_eq!(d.verdict, Verdict::NotLeq);
        let Witness::Measure(w) = &d.witness else { panic!() };
        assert!(w.values[0] + w.values[2] > 0);
        e.audit_leq(&el(&[1, 0, 1, 0]), &a, &d).unwrap();
    }

    #[test]
    fn omega_normalize_examples() {
        let e = TypeEngine::new(parity());
        let p = el(&[1, 1, 0, 0]);
        assert_eq!(e.omega_normalize(&p), p);
        let w0 = AbarElement::from_parts(vec![0, 1, 2, 0], AtomSet::singleton(0));
        let n = e.omega_normalize(&w0);
        // ω at {0} pulls in {2} (same orbit) and absorbs it, but not {1}
        assert_eq!(n.omega(), AtomSet(0b101));
        assert_eq!(n.finite(), &[0, 1, 0, 0]);

        let c = TypeEngine::new(collapse());
        let w = AbarElement::from_parts(vec![0, 3], AtomSet::singleton(0));
        assert_eq!(c.omega_normalize(&w), AbarElement::omega_of(2, AtomSet(0b11)));
        assert_eq!(c.closure(AtomSet::EMPTY).inside, AtomSet::singleton(1));
    }

    #[test]
    fn type_operations() {
        let e = TypeEngine::new(parity());
        let zero = e.type_zero();
        let empty = e.type_of(AtomSet::EMPTY).unwrap();
        assert_eq!(e.type_equal(&zero, &empty).unwrap().verdict, Verdict::Equal);
        let x = e.type_of(e.space().whole()).unwrap();
        let a0 = e.type_of(AtomSet::singleton(0)).unwrap();
        let a1 = e.type_of(AtomSet::singleton(1)).unwrap();
        let s = e
            .type_add(&e.type_scale(&a0, 2).unwrap(), &e.type_scale(&a1, 2).unwrap())
            .unwrap();
        assert_eq!(e.type_equal(&x, &s).unwrap().verdict, Verdict::Equal);

        let c = TypeEngine::new(collapse());
        let one = c.type_of(AtomSet::singleton(1)).unwrap();
        assert_eq!(c.type_equal(&one, &c.type_zero()).unwrap().verdict, Verdict::Equal);
    }

    #[test]
    fn types_are_space_bound() {
        let e = TypeEngine::new(parity());
        let c = TypeEngine::new(collapse());
        assert!(matches!(
            e.type_equal(&e.type_zero(), &c.type_zero()),
            Err(Error::SpaceMismatch)
        ));
    }

    #[test]
    fn realization_examples() {
        let sp = parity();
        let unit = sp.monoid().unit();
        let empty = Realization {
            left: vec![],
            right: vec![],
            moves: vec![],
        };
        let z = AbarElement::zero(4);
        assert!(verify_realization(&sp, &z, &z, &empty).unwrap());
        let a = el(&[1, 0, 0, 0]);
        let b = el(&[0, 0, 1, 0]);
        let good = Realization {
            left: vec![a.clone()],
            right: vec![b.clone()],
            moves: vec![Move { s: g1(&sp), t: unit }],
        };
        assert!(verify_realization(&sp, &a, &b, &good).unwrap());
        let bad = Realization {
            moves: vec![Move { s: unit, t: unit }],
            ..good
        };
        assert!(!verify_realization(&sp, &a, &b, &bad).unwrap());
    }

    #[test]
    fn morphism_type_map_examples() {
        let p = parity();
        let two = Arc::new(with_trivial_symmetry(
            build_space(vec!["even".into(), "odd".into()], vec![vec![0], vec![1]]).unwrap(),
        ));
        let m = StatMorphism {
            source: p.clone(),
            target: two,
            f: vec![0, 1, 0, 1],
            f_star: vec![0],
        };
        let tm = morphism_type_map(&m).unwrap();
        assert_eq!(tm.apply(&el(&[1, 0])).unwrap(), el(&[1, 0, 1, 0]));
        let id = crate::statmeas::identity_morphism(p.clone());
        let tid = morphism_type_map(&id).unwrap();
        let x = AbarElement::from_parts(vec![1, 2, 0, 0], AtomSet::singleton(3));
        assert_eq!(tid.apply(&x).unwrap(), x);
    }
}
