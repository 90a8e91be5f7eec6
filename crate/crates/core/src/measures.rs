//! Stationary measures: paradoxicality, classical measures by exact linear
//! programming, hierarchical measures at a scale, and measures with values
//! in other commutative monoids.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice_quantity::{IdempotentLattice, QuantitySpace};
use crate::linalg::{q, Q};
use crate::lp::{exact_lp_feasible, FarkasCertificate, Feasibility, Relation};
use crate::statmeas::{AtomSet, StatSpace};
use crate::type_engine::{relation_basis, AbarElement, Decision, TarskiType, TypeEngine, Verdict};

/// A stationary measure with values in `[0, ∞]`: rational on finite atoms,
/// `∞` on `infinite`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalStationaryMeasure {
    pub finite: Vec<Q>,
    pub infinite: AtomSet,
}

impl RationalStationaryMeasure {
    pub fn zero(n: usize) -> Self {
        Self {
            finite: vec![Q::zero(); n],
            infinite: AtomSet::EMPTY,
        }
    }

    /// `None` stands for `∞`.
    pub fn value(&self, set: AtomSet) -> Option<Q> {
        if !set.is_disjoint(self.infinite) {
            return None;
        }
        Some(set.iter().map(|a| self.finite[a].clone()).sum())
    }

    /// Stationarity on every measurable set and every monoid element, plus
    /// nonnegativity.
    pub fn check(&self, space: &StatSpace) -> std::result::Result<(), String> {
        if self.finite.len() != space.num_atoms() {
            return Err("measure has the wrong number of atoms".into());
        }
        if let Some(a) = (0..self.finite.len()).find(|&a| self.finite[a].is_negative()) {
            return Err(format!("negative value on atom {a}"));
        }
        for s in space.monoid().elements() {
            for set in space.measurable_sets() {
                if self.value(space.pullback(s, set)) != self.value(set) {
                    return Err(format!(
                        "μ({}) differs from its pullback under {}",
                        space.space().set_label(set),
                        space.monoid().label(s)
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn as_t_measure(&self) -> TMeasureSpec<ExtendedReals> {
        TMeasureSpec {
            target: ExtendedReals,
            assignment: (0..self.finite.len())
                .map(|a| self.value(AtomSet::singleton(a)))
                .collect(),
        }
    }
}

impl fmt::Display for RationalStationaryMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.finite.len())
            .map(|a| {
                if self.infinite.contains(a) {
                    format!("{a}: ∞")
                } else {
                    format!("{a}: {}", self.finite[a])
                }
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `2[E] ⪯ [E]`. A positive answer is cross-checked against `2[E] = [E]`.
pub fn is_paradoxical(engine: &TypeEngine, set: AtomSet) -> Result<Decision> {
    let e = engine.type_of(set)?;
    let two = engine.type_scale(&e, 2)?;
    let d = engine.type_leq(&two, &e)?;
    if d.verdict == Verdict::Leq && engine.type_equal(&two, &e)?.verdict == Verdict::NotEqual {
        return Err(Error::Contract("2[E] ⪯ [E] but 2[E] and [E] are separated".into()));
    }
    Ok(d)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Synthesis {
    Found(RationalStationaryMeasure),
    /// One Farkas certificate per attempted infinite set.
    Infeasible(Vec<(AtomSet, FarkasCertificate)>),
}

impl Synthesis {
    pub fn measure(&self) -> Option<&RationalStationaryMeasure> {
        match self {
            Synthesis::Found(m) => Some(m),
            Synthesis::Infeasible(_) => None,
        }
    }
}

/// A stationary measure with `μ(E) = 1`, trying the all-finite system first
/// and then each admissible infinite set by increasing size.
pub fn synthesize_classical_measure(engine: &TypeEngine, set: AtomSet) -> Result<Synthesis> {
    if set.is_empty() {
        return Err(Error::EmptyNormalization);
    }
    let n = engine.num_atoms();
    let mut certificates = Vec::new();
    for &inf in engine.stable_sets() {
        if !inf.is_disjoint(set) {
            continue;
        }
        let mut sys = engine.stationary_system(inf);
        let norm: Vec<i64> = (0..n).map(|a| set.contains(a) as i64).collect();
        sys.add_int(&norm, Relation::Eq, 1);
        match exact_lp_feasible(&sys) {
            Feasibility::Feasible(x) => {
                let m = RationalStationaryMeasure {
                    finite: x,
                    infinite: inf,
                };
                m.check(engine.space()).map_err(Error::Contract)?;
                return Ok(Synthesis::Found(m));
            }
            Feasibility::Infeasible(cert) => certificates.push((inf, cert)),
        }
    }
    Ok(Synthesis::Infeasible(certificates))
}

#[derive(Clone, Debug)]
pub struct TarskiCheck {
    pub set: AtomSet,
    /// `[E] = 0`: no normalization is possible, and `E` is not paradoxical
    /// in any useful sense; such sets are left out of the comparison.
    pub null_type: bool,
    pub paradox: Decision,
    pub synthesis: Synthesis,
    /// `None` when excluded or undecided.
    pub agree: Option<bool>,
}

pub fn cross_check_tarski(engine: &TypeEngine, set: AtomSet) -> Result<TarskiCheck> {
    if set.is_empty() {
        return Err(Error::EmptyNormalization);
    }
    let e = engine.type_of(set)?;
    let null_type = engine.type_equal(&e, &engine.type_zero())?.verdict == Verdict::Equal;
    let paradox = is_paradoxical(engine, set)?;
    let synthesis = synthesize_classical_measure(engine, set)?;
    let agree = if null_type {
        None
    } else {
        match paradox.verdict {
            Verdict::Leq => Some(synthesis.measure().is_none()),
            Verdict::NotLeq => Some(synthesis.measure().is_some()),
            _ => None,
        }
    };
    Ok(TarskiCheck {
        set,
        null_type,
        paradox,
        synthesis,
        agree,
    })
}

/// Value of the hierarchical measure at a scale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HierarchicalValue {
    /// A member of the isotropy monoid at the scale.
    Finite(AbarElement),
    /// An idempotent minimal above the scale.
    Infinite(usize),
}

/// `[A] + e` when it stays at scale `e`, else the largest minimal
/// idempotent above `e` below it.
pub fn hierarchical_measure(
    engine: &TypeEngine,
    lattice: &IdempotentLattice,
    e: usize,
    set: AtomSet,
) -> Result<HierarchicalValue> {
    let n = engine.num_atoms();
    let a = engine.type_of(set)?;
    let x = engine.omega_normalize(&a.representative().add(&lattice.elements[e].element(n))?);
    if lattice.idempotent_of(engine, &x)? == e {
        return Ok(HierarchicalValue::Finite(x));
    }
    let mut below = Vec::new();
    for f in lattice.complete_isotropy(e) {
        match engine.decide_leq(&lattice.elements[f].element(n), &x)?.verdict {
            Verdict::Leq => below.push(f),
            Verdict::NotLeq => {}
            _ => return Err(Error::Undecided("∞-candidate below a value".into())),
        }
    }
    let maxima: Vec<usize> = below
        .iter()
        .copied()
        .filter(|&f| below.iter().all(|&g| g == f || !lattice.le(f, g)))
        .collect();
    match maxima.as_slice() {
        [f] => Ok(HierarchicalValue::Infinite(*f)),
        [] => Err(Error::Contract("no ∞-value lies below the type".into())),
        _ => Err(Error::Ambiguous(format!(
            "{} incomparable ∞-values lie below the type",
            maxima.len()
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullIdeal {
    pub sets: Vec<AtomSet>,
    pub downward_closed: bool,
    pub union_closed: bool,
}

/// Measurable `N` with `m_e(N) = e`.
pub fn null_ideal(engine: &TypeEngine, lattice: &IdempotentLattice, e: usize) -> Result<NullIdeal> {
    let n = engine.num_atoms();
    let unit = lattice.elements[e].element(n);
    let mut sets = Vec::new();
    for set in engine.space().measurable_sets() {
        let x = engine.omega_normalize(&engine.type_of(set)?.representative().add(&unit)?);
        match engine.decide_equal(&x, &unit)?.verdict {
            Verdict::Equal => sets.push(set),
            Verdict::NotEqual => {}
            _ => return Err(Error::Undecided("null set membership".into())),
        }
    }
    let downward_closed = sets.iter().all(|s| s.subsets().all(|t| sets.contains(&t)));
    let union_closed = sets.iter().all(|a| sets.iter().all(|b| sets.contains(&a.union(*b))));
    Ok(NullIdeal {
        sets,
        downward_closed,
        union_closed,
    })
}

/// A commutative monoid receiving measures.
pub trait TargetMonoid {
    type Elem: Clone + PartialEq + fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Countable-fold sum, when the target has one.
    fn omega(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> Result<bool>;
    /// The algebraic order `a + c = b`.
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> Result<bool>;
}

/// `[0, ∞]` with rational finite values; `None` is `∞`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExtendedReals;

impl TargetMonoid for ExtendedReals {
    type Elem = Option<Q>;

    fn zero(&self) -> Self::Elem {
        Some(Q::zero())
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        match (a, b) {
            (Some(x), Some(y)) => Some(x + y),
            _ => None,
        }
    }

    fn omega(&self, a: &Self::Elem) -> Option<Self::Elem> {
        Some(match a {
            Some(x) if x.is_zero() => Some(Q::zero()),
            _ => None,
        })
    }

    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> Result<bool> {
        Ok(a == b)
    }

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> Result<bool> {
        Ok(match (a, b) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(x), Some(y)) => x <= y,
        })
    }
}

/// The type monoid of a space, elements kept in ω-normal form.
pub struct TypeTarget<'a> {
    pub engine: &'a TypeEngine,
}

fn decided(v: Verdict) -> Result<bool> {
    match v {
        Verdict::Equal | Verdict::Leq => Ok(true),
        Verdict::NotEqual | Verdict::NotLeq => Ok(false),
        Verdict::Unknown => Err(Error::Undecided("type monoid target".into())),
    }
}

impl TargetMonoid for TypeTarget<'_> {
    type Elem = AbarElement;

    fn zero(&self) -> AbarElement {
        self.engine.type_zero().representative().clone()
    }

    fn add(&self, a: &AbarElement, b: &AbarElement) -> AbarElement {
        self.engine.omega_normalize(&a.add(b).expect("same space"))
    }

    fn omega(&self, a: &AbarElement) -> Option<AbarElement> {
        Some(self.engine.omega_normalize(&a.omega_multiple()))
    }

    fn equal(&self, a: &AbarElement, b: &AbarElement) -> Result<bool> {
        decided(self.engine.decide_equal(a, b)?.verdict)
    }

    fn leq(&self, a: &AbarElement, b: &AbarElement) -> Result<bool> {
        decided(self.engine.decide_leq(a, b)?.verdict)
    }
}

/// `ℕ^k` modulo finitely many relations `lhs ≡ rhs`, decided by bounded
/// breadth-first rewriting.
#[derive(Clone, Debug)]
pub struct PresentedMonoid {
    pub generators: usize,
    pub relations: Vec<(Vec<u32>, Vec<u32>)>,
    pub coord_cap: u32,
    pub max_states: usize,
}

impl PresentedMonoid {
    pub fn free(generators: usize) -> Self {
        Self {
            generators,
            relations: Vec::new(),
            coord_cap: 16,
            max_states: 50_000,
        }
    }

    /// Explores the class of `start` until `target` holds.
    fn explore(&self, start: &[u32], target: impl Fn(&[u32]) -> bool) -> Result<bool> {
        use std::collections::{HashSet, VecDeque};
        let mut seen: HashSet<Vec<u32>> = HashSet::from([start.to_vec()]);
        let mut queue = VecDeque::from([start.to_vec()]);
        let mut truncated = false;
        while let Some(x) = queue.pop_front() {
            if target(&x) {
                return Ok(true);
            }
            for (l, r) in &self.relations {
                for (take, give) in [(l, r), (r, l)] {
                    if x.iter().zip(take).any(|(a, b)| a < b) {
                        continue;
                    }
                    let y: Vec<u32> = x.iter().zip(take).zip(give).map(|((a, t), g)| a - t + g).collect();
                    if seen.contains(&y) {
                        continue;
                    }
                    if y.iter().any(|&m| m > self.coord_cap) || seen.len() >= self.max_states {
                        truncated = true;
                        continue;
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        if truncated {
            Err(Error::Undecided("presented monoid word problem".into()))
        } else {
            Ok(false)
        }
    }
}

impl TargetMonoid for PresentedMonoid {
    type Elem = Vec<u32>;

    fn zero(&self) -> Vec<u32> {
        vec![0; self.generators]
    }

    fn add(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn omega(&self, _: &Vec<u32>) -> Option<Vec<u32>> {
        None
    }

    fn equal(&self, a: &Vec<u32>, b: &Vec<u32>) -> Result<bool> {
        self.explore(a, |x| x == b.as_slice())
    }

    fn leq(&self, a: &Vec<u32>, b: &Vec<u32>) -> Result<bool> {
        self.explore(b, |x| x.iter().zip(a).all(|(p, q)| p >= q))
    }
}

/// A measure given by its values on atoms, extended additively.
#[derive(Clone, Debug)]
pub struct TMeasureSpec<T: TargetMonoid> {
    pub target: T,
    pub assignment: Vec<T::Elem>,
}

impl<T: TargetMonoid> TMeasureSpec<T> {
    pub fn value(&self, set: AtomSet) -> T::Elem {
        set.iter()
            .fold(self.target.zero(), |acc, a| self.target.add(&acc, &self.assignment[a]))
    }

    /// Countably additive extension to Ā, when the target has ω-sums.
    pub fn value_abar(&self, p: &AbarElement) -> Option<T::Elem> {
        let mut acc = self.target.zero();
        for (a, &m) in p.finite().iter().enumerate() {
            for _ in 0..m {
                acc = self.target.add(&acc, &self.assignment[a]);
            }
        }
        for a in p.omega().iter() {
            acc = self.target.add(&acc, &self.target.omega(&self.assignment[a])?);
        }
        Some(acc)
    }
}

/// The Tarski measure `A ↦ [A]`.
pub fn tarski_measure_spec(engine: &TypeEngine) -> TMeasureSpec<TypeTarget<'_>> {
    let target = TypeTarget { engine };
    let assignment = (0..engine.num_atoms())
        .map(|a| {
            engine
                .type_of(AtomSet::singleton(a))
                .expect("atoms are measurable")
                .representative()
                .clone()
        })
        .collect();
    TMeasureSpec { target, assignment }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub stationary: bool,
    pub monotone: bool,
    pub aparadoxical: bool,
}

/// Values on `{0, 1, ω}`-combinations of atoms (`{0, 1}` without ω-sums),
/// deduplicated.
fn image<T: TargetMonoid>(n: usize, spec: &TMeasureSpec<T>) -> Result<Vec<T::Elem>> {
    let has_omega = spec.target.omega(&spec.target.zero()).is_some();
    let base = if has_omega { 3usize } else { 2 };
    let mut out: Vec<T::Elem> = Vec::new();
    for mut code in 0..base.pow(n as u32) {
        let mut finite = vec![0u32; n];
        let mut omega = AtomSet::EMPTY;
        for (a, slot) in finite.iter_mut().enumerate() {
            match code % base {
                1 => *slot = 1,
                2 => omega = omega.with(a),
                _ => {}
            }
            code /= base;
        }
        let v = spec
            .value_abar(&AbarElement::from_parts(finite, omega))
            .ok_or_else(|| Error::Contract("missing ω-sum".into()))?;
        if out.contains(&v) {
            continue;
        }
        let mut dup = false;
        for w in &out {
            if spec.target.equal(w, &v)? {
                dup = true;
                break;
            }
        }
        if !dup {
            out.push(v);
        }
    }
    Ok(out)
}

pub fn classify_t_measure<T: TargetMonoid>(space: &StatSpace, spec: &TMeasureSpec<T>) -> Result<Classification> {
    let n = space.num_atoms();
    if spec.assignment.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: spec.assignment.len(),
        });
    }
    let mut stationary = true;
    for r in relation_basis(space) {
        if !spec.target.equal(&spec.value(r.lhs()), &spec.value(r.rhs))? {
            stationary = false;
            break;
        }
    }
    let img = image(n, spec)?;
    let zero = spec.target.zero();
    let mut monotone = true;
    for x in &img {
        if !spec.target.equal(x, &zero)? && spec.target.leq(x, &zero)? {
            monotone = false;
        }
    }
    let mut aparadoxical = true;
    for x in &img {
        if !spec.target.equal(&spec.target.add(x, x), x)? {
            continue;
        }
        let mut bottom = true;
        let mut top = true;
        for y in &img {
            bottom &= spec.target.leq(x, y)?;
            top &= spec.target.leq(y, x)?;
        }
        if !bottom && !top {
            aparadoxical = false;
        }
    }
    Ok(Classification {
        stationary,
        monotone,
        aparadoxical,
    })
}

#[derive(Clone, Debug)]
pub struct TExtension<E> {
    /// The largest idempotent the measure sends to zero.
    pub scale: usize,
    /// One row per distinct hierarchical value: a set realizing it, the
    /// value, and the extended measure there.
    pub table: Vec<(AtomSet, HierarchicalValue, E)>,
    pub factorization_exact: bool,
    pub idempotents_absorbing: bool,
    pub perturbation_rejected: bool,
}

/// Factors an aparadoxical monotone measure through the hierarchical
/// measure at the largest idempotent it kills.
pub fn extend_t_measure<T: TargetMonoid>(
    engine: &TypeEngine,
    lattice: &IdempotentLattice,
    spec: &TMeasureSpec<T>,
) -> Result<TExtension<T::Elem>> {
    let cls = classify_t_measure(engine.space(), spec)?;
    if !(cls.stationary && cls.monotone && cls.aparadoxical) {
        return Err(Error::Contract(format!(
            "measure must be stationary, monotone and aparadoxical, got {cls:?}"
        )));
    }
    let n = engine.num_atoms();
    let zero = spec.target.zero();
    let mut killed = Vec::new();
    for (i, e) in lattice.elements.iter().enumerate() {
        let v = spec
            .value_abar(&e.element(n))
            .ok_or_else(|| Error::Contract("target has no ω-sums".into()))?;
        if spec.target.equal(&v, &zero)? {
            killed.push(i);
        }
    }
    let maxima: Vec<usize> = killed
        .iter()
        .copied()
        .filter(|&i| killed.iter().all(|&j| lattice.le(j, i)))
        .collect();
    let scale = match maxima.as_slice() {
        [e] => *e,
        _ => return Err(Error::Ambiguous("no largest killed idempotent".into())),
    };

    let mut table: Vec<(AtomSet, HierarchicalValue, T::Elem)> = Vec::new();
    let mut rows_of_sets = Vec::new();
    for set in engine.space().measurable_sets() {
        let h = hierarchical_measure(engine, lattice, scale, set)?;
        let mut row = None;
        for (i, (_, g, _)) in table.iter().enumerate() {
            if same_value(engine, g, &h)? {
                row = Some(i);
                break;
            }
        }
        let row = match row {
            Some(i) => i,
            None => {
                table.push((set, h, spec.value(set)));
                table.len() - 1
            }
        };
        rows_of_sets.push((set, row));
    }
    let factors = |values: &[T::Elem]| -> Result<bool> {
        for (set, row) in &rows_of_sets {
            if !spec.target.equal(&spec.value(*set), &values[*row])? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let values: Vec<T::Elem> = table.iter().map(|r| r.2.clone()).collect();
    let factorization_exact = factors(&values)?;

    let mut idempotents_absorbing = true;
    for f in (0..lattice.len()).filter(|&f| lattice.le(scale, f)) {
        let v = spec
            .value_abar(&lattice.elements[f].element(n))
            .expect("ω-sums checked");
        idempotents_absorbing &= spec.target.equal(&spec.target.add(&v, &v), &v)?;
    }

    let mut perturbation_rejected = true;
    for i in 0..values.len() {
        let doubled = spec.target.add(&values[i], &values[i]);
        if !spec.target.equal(&doubled, &values[i])? {
            let mut alt = values.clone();
            alt[i] = doubled;
            perturbation_rejected = !factors(&alt)?;
            break;
        }
    }
    Ok(TExtension {
        scale,
        table,
        factorization_exact,
        idempotents_absorbing,
        perturbation_rejected,
    })
}

fn same_value(engine: &TypeEngine, a: &HierarchicalValue, b: &HierarchicalValue) -> Result<bool> {
    match (a, b) {
        (HierarchicalValue::Finite(x), HierarchicalValue::Finite(y)) => decided(engine.decide_equal(x, y)?.verdict),
        (HierarchicalValue::Infinite(f), HierarchicalValue::Infinite(g)) => Ok(f == g),
        _ => Ok(false),
    }
}

/// Tail of an increasing sequence after its explicit prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tail {
    Constant,
    /// `A_{k+1} = A_k + v`.
    Periodic(AbarElement),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncreasingSchema {
    pub prefix: Vec<AbarElement>,
    pub tail: Tail,
}

impl IncreasingSchema {
    pub fn term(&self, k: usize) -> AbarElement {
        let last = self.prefix.len() - 1;
        if k <= last {
            return self.prefix[k].clone();
        }
        match &self.tail {
            Tail::Constant => self.prefix[last].clone(),
            Tail::Periodic(v) => self.prefix[last].add(&v.scale((k - last) as u32)).expect("same space"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Colimit {
    pub limit: TarskiType,
    /// Every probed term lies below the limit.
    pub terms_below: bool,
    /// The limit lies below every probed candidate that bounds the terms.
    pub least: bool,
}

/// Number of sequence terms compared against the limit.
pub const COLIMIT_PROBE: usize = 6;

pub fn colimit_increasing(
    engine: &TypeEngine,
    lattice: &IdempotentLattice,
    schema: &IncreasingSchema,
) -> Result<Colimit> {
    let n = engine.num_atoms();
    if schema.prefix.is_empty() {
        return Err(Error::Malformed("empty sequence".into()));
    }
    if schema.prefix.windows(2).any(|w| !w[1].dominates(&w[0])) {
        return Err(Error::Contract("sequence is not increasing".into()));
    }
    let last = schema.prefix.last().expect("nonempty").clone();
    let limit_el = match &schema.tail {
        Tail::Constant => last.clone(),
        Tail::Periodic(v) => last.add(&v.omega_multiple())?,
    };
    let limit = engine.type_of_element(&limit_el)?;
    let terms: Vec<AbarElement> = (0..schema.prefix.len() + COLIMIT_PROBE)
        .map(|k| engine.omega_normalize(&schema.term(k)))
        .collect();
    let mut terms_below = true;
    for t in &terms {
        terms_below &= decided(engine.decide_leq(t, limit.representative())?.verdict)?;
    }
    let mut least = true;
    let probe_last = terms.last().expect("nonempty");
    for e in &lattice.elements {
        let u = engine.omega_normalize(&last.add(&e.element(n))?);
        let bounds = match &schema.tail {
            Tail::Constant => decided(engine.decide_leq(probe_last, &u)?.verdict)?,
            // a bound of every term must absorb the whole tail
            Tail::Periodic(v) => {
                decided(engine.decide_leq(probe_last, &u)?.verdict)?
                    && decided(
                        engine
                            .decide_leq(&engine.omega_normalize(&v.omega_multiple()), &u)?
                            .verdict,
                    )?
            }
        };
        if bounds {
            least &= decided(engine.decide_leq(limit.representative(), &u)?.verdict)?;
        }
    }
    Ok(Colimit {
        limit,
        terms_below,
        least,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LawTally {
    pub checked: usize,
    pub failed: usize,
    pub unknown: usize,
}

impl LawTally {
    fn record(&mut self, v: Option<bool>) {
        self.checked += 1;
        match v {
            Some(true) => {}
            Some(false) => self.failed += 1,
            None => self.unknown += 1,
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0 && self.unknown == 0
    }
}

#[derive(Clone, Debug, Default)]
pub struct ContinuityReport {
    pub monotonicity: LawTally,
    pub subadditivity: LawTally,
    pub from_below: LawTally,
    pub from_above: LawTally,
}

impl ContinuityReport {
    pub fn passed(&self) -> bool {
        self.monotonicity.passed()
            && self.subadditivity.passed()
            && self.from_below.passed()
            && self.from_above.passed()
    }
}

fn holds(d: &Decision) -> Option<bool> {
    d.holds()
}

/// Monotonicity and subadditivity on all pairs of measurable sets,
/// continuity from below on `schemas` random increasing sequences, and
/// continuity from above on eventually constant chains at every scale.
pub fn continuity_suite(
    engine: &TypeEngine,
    lattice: &IdempotentLattice,
    seed: u64,
    schemas: usize,
) -> Result<ContinuityReport> {
    let n = engine.num_atoms();
    let space = engine.space();
    let mut report = ContinuityReport::default();
    let sets: Vec<AtomSet> = space.measurable_sets().collect();
    for &a in &sets {
        for &b in &sets {
            let ta = engine.type_of(a)?;
            let tb = engine.type_of(b)?;
            if a.is_subset(b) {
                report.monotonicity.record(holds(&engine.type_leq(&ta, &tb)?));
            }
            let union = engine.type_of(a.union(b))?;
            let sum = engine.type_add(&ta, &tb)?;
            report.subadditivity.record(holds(&engine.type_leq(&union, &sum)?));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..schemas {
        let mut cur = AbarElement::zero(n);
        let mut prefix = vec![cur.clone()];
        for _ in 0..rng.gen_range(0..3) {
            let a = rng.gen_range(0..n);
            cur = cur.add(&AbarElement::atom(n, a))?;
            prefix.push(cur.clone());
        }
        let tail = if rng.gen_bool(0.5) {
            Tail::Constant
        } else {
            Tail::Periodic(AbarElement::of_set(n, AtomSet::singleton(rng.gen_range(0..n))))
        };
        let schema = IncreasingSchema { prefix, tail };
        let c = colimit_increasing(engine, lattice, &schema)?;
        report.from_below.record(Some(c.terms_below && c.least));
    }

    let qs = QuantitySpace::new(engine, lattice);
    let top = lattice.elements[lattice.top].element(n);
    for (e, idem) in lattice.elements.iter().enumerate() {
        if e == lattice.top {
            continue;
        }
        let unit = idem.element(n);
        for b in space.whole().minus(idem.support).iter() {
            // ⊤, ⊤, ⊤, then constantly [{b}] + e
            let tail = engine.omega_normalize(&AbarElement::atom(n, b).add(&unit)?);
            let chain = [top.clone(), top.clone(), top.clone(), tail.clone(), tail.clone()];
            let mut decreasing = true;
            for w in chain.windows(2) {
                decreasing &= decided(engine.decide_leq(&w[1], &w[0])?.verdict)?;
            }
            let limit = &chain[chain.len() - 1];
            let stable = decided(engine.decide_equal(limit, &chain[chain.len() - 2])?.verdict)?;
            let meet_plus_e =
                engine.omega_normalize(&engine.type_of(AtomSet::singleton(b))?.representative().add(&unit)?);
            let at_scale = lattice
                .isotropy_decompose(engine, limit)
                .map(|m| m.scale == e)
                .unwrap_or(false);
            let in_group = if at_scale {
                let l = qs.embed(&engine.type_of_element(limit)?)?;
                let r = qs.embed(&engine.type_of_element(&meet_plus_e)?)?;
                qs.quantity_eq(&l, &r)?
            } else {
                false
            };
            report
                .from_above
                .record(Some(decreasing && stable && at_scale && in_group));
        }
    }
    Ok(report)
}

/// Value of a measure on a set, `∞` rendered as `None`, for reports.
pub fn value_string(v: &Option<Q>) -> String {
    match v {
        Some(x) => x.to_string(),
        None => "∞".into(),
    }
}

/// `1` as a rational.
pub fn one() -> Q {
    Q::one()
}

/// Integer as a rational.
pub fn rational(n: i64) -> Q {
    q(n)
}
