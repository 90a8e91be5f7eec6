//! Idempotent types, isotropy monoids and the quantity space.
//!
//! Every idempotent type is a countable-fold sum, so it is `ω·χ_W` for some
//! atom set `W`; enumerating the closures of all `W` therefore finds every
//! idempotent. The order between idempotents is `e ⪯ f ⟺ e + f = f`.

use std::fmt;

use crate::error::{Error, Result};
use crate::statmeas::AtomSet;
use crate::type_engine::{AbarElement, TarskiType, TypeEngine, Verdict};

/// A finite poset given by its order relation, queried as a lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    pub leq: Vec<Vec<bool>>,
}

/// A triple violating a lattice law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeCounterexample {
    pub law: &'static str,
    pub elements: (usize, usize, usize),
}

impl fmt::Display for LatticeCounterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b, c) = self.elements;
        write!(f, "{} fails at ({a}, {b}, {c})", self.law)
    }
}

impl FiniteLattice {
    pub fn size(&self) -> usize {
        self.leq.len()
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// Greatest lower bound, if it exists.
    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        let lower: Vec<usize> = (0..self.size()).filter(|&x| self.le(x, a) && self.le(x, b)).collect();
        lower.iter().copied().find(|&m| lower.iter().all(|&x| self.le(x, m)))
    }

    /// Least upper bound, if it exists.
    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        let upper: Vec<usize> = (0..self.size()).filter(|&x| self.le(a, x) && self.le(b, x)).collect();
        upper.iter().copied().find(|&m| upper.iter().all(|&x| self.le(m, x)))
    }

    pub fn is_chain(&self) -> bool {
        (0..self.size()).all(|a| (0..self.size()).all(|b| self.le(a, b) || self.le(b, a)))
    }

    /// Pairs `(a, b)` with `b` covering `a`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.le(a, b) && !(0..n).any(|c| c != a && c != b && self.le(a, c) && self.le(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// Tests both distributive laws and both absorption laws on all triples.
pub fn check_distributive(l: &FiniteLattice) -> std::result::Result<(), LatticeCounterexample> {
    let n = l.size();
    let fail = |law, a, b, c| LatticeCounterexample {
        law,
        elements: (a, b, c),
    };
    let m = |a, b| l.meet(a, b);
    let j = |a, b| l.join(a, b);
    for a in 0..n {
        for b in 0..n {
            let (Some(ab_m), Some(ab_j)) = (m(a, b), j(a, b)) else {
                return Err(fail("existence of meet and join", a, b, b));
            };
            if j(a, ab_m) != Some(a) {
                return Err(fail("absorption a ∨ (a ∧ b) = a", a, b, b));
            }
            if m(a, ab_j) != Some(a) {
                return Err(fail("absorption a ∧ (a ∨ b) = a", a, b, b));
            }
            for c in 0..n {
                let lhs = j(b, c).and_then(|x| m(a, x));
                let rhs = match (m(a, b), m(a, c)) {
                    (Some(x), Some(y)) => j(x, y),
                    _ => None,
                };
                if lhs != rhs {
                    return Err(fail("a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)", a, b, c));
                }
                let lhs = m(b, c).and_then(|x| j(a, x));
                let rhs = match (j(a, b), j(a, c)) {
                    (Some(x), Some(y)) => m(x, y),
                    _ => None,
                };
                if lhs != rhs {
                    return Err(fail("a ∨ (b ∧ c) = (a ∨ b) ∧ (a ∨ c)", a, b, c));
                }
            }
        }
    }
    Ok(())
}

/// The diamond `M₃`, the smallest modular lattice that is not distributive.
pub fn m3() -> FiniteLattice {
    // 0 = bottom, 1..=3 atoms, 4 = top
    let mut leq = vec![vec![false; 5]; 5];
    for (a, row) in leq.iter_mut().enumerate() {
        row[a] = true;
        row[4] = true;
    }
    leq[0] = vec![true; 5];
    FiniteLattice { leq }
}

/// An idempotent type `ω·χ_support` with a closed support.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdempotentElement {
    pub support: AtomSet,
}

impl IdempotentElement {
    pub fn element(&self, n: usize) -> AbarElement {
        AbarElement::omega_of(n, self.support)
    }
}

#[derive(Clone, Debug)]
pub struct IdempotentLattice {
    pub elements: Vec<IdempotentElement>,
    pub order: FiniteLattice,
    pub bottom: usize,
    pub top: usize,
    /// Candidate pairs whose identification the engine could not decide.
    pub undecided: Vec<(AtomSet, AtomSet)>,
}

fn decided(v: Verdict, what: &str) -> Result<bool> {
    match v {
        Verdict::Equal | Verdict::Leq => Ok(true),
        Verdict::NotEqual | Verdict::NotLeq => Ok(false),
        Verdict::Unknown => Err(Error::Undecided(what.to_string())),
    }
}

pub fn enumerate_idempotents(engine: &TypeEngine) -> Result<IdempotentLattice> {
    let n = engine.num_atoms();
    let mut supports: Vec<AtomSet> = engine
        .space()
        .whole()
        .subsets()
        .map(|w| engine.closure(w).inside)
        .collect();
    supports.sort_by_key(|s| (s.len(), s.0));
    supports.dedup();
    let mut elements: Vec<IdempotentElement> = Vec::new();
    let mut undecided = Vec::new();
    for s in supports {
        let cand = AbarElement::omega_of(n, s);
        let mut merged = false;
        for e in &elements {
            let d = engine.decide_equal(&cand, &e.element(n))?;
            match d.verdict {
                Verdict::Equal => merged = true,
                Verdict::Unknown => undecided.push((e.support, s)),
                _ => {}
            }
            if merged {
                break;
            }
        }
        if !merged {
            elements.push(IdempotentElement { support: s });
        }
    }
    let k = elements.len();
    let mut leq = vec![vec![false; k]; k];
    for a in 0..k {
        for b in 0..k {
            let e = elements[a].element(n);
            let f = elements[b].element(n);
            let sum = engine.omega_normalize(&e.add(&f)?);
            let d = engine.decide_equal(&sum, &f)?;
            leq[a][b] = match d.verdict {
                Verdict::Equal => true,
                Verdict::NotEqual => false,
                _ => {
                    undecided.push((elements[a].support, elements[b].support));
                    elements[a].support.is_subset(elements[b].support)
                }
            };
        }
    }
    let order = FiniteLattice { leq };
    let bottom = (0..k)
        .find(|&a| (0..k).all(|b| order.le(a, b)))
        .ok_or_else(|| Error::Contract("idempotents have no least element".into()))?;
    let top = (0..k)
        .find(|&a| (0..k).all(|b| order.le(b, a)))
        .ok_or_else(|| Error::Contract("idempotents have no greatest element".into()))?;
    Ok(IdempotentLattice {
        elements,
        order,
        bottom,
        top,
        undecided,
    })
}

impl IdempotentLattice {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, support: AtomSet) -> Option<usize> {
        self.elements.iter().position(|e| e.support == support)
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.order.le(a, b)
    }

    /// Greatest lower bound; the realization-maximum `max [E ∩ F]` is the
    /// same element.
    pub fn meet(&self, a: usize, b: usize) -> Result<usize> {
        self.order
            .meet(a, b)
            .ok_or_else(|| Error::Contract(format!("no meet of {a} and {b}")))
    }

    /// `e ∨ f = e + f`.
    pub fn join(&self, engine: &TypeEngine, a: usize, b: usize) -> Result<usize> {
        let n = engine.num_atoms();
        let sum = self.elements[a].element(n).add(&self.elements[b].element(n))?;
        let s = engine.omega_normalize(&sum).omega();
        self.index_of(s)
            .or_else(|| self.order.join(a, b))
            .ok_or_else(|| Error::Contract(format!("no join of {a} and {b}")))
    }

    /// Minimal idempotents strictly above `e`, the ∞-values at scale `e`.
    pub fn complete_isotropy(&self, e: usize) -> Vec<usize> {
        let above: Vec<usize> = (0..self.len()).filter(|&f| f != e && self.le(e, f)).collect();
        above
            .iter()
            .copied()
            .filter(|&f| !above.iter().any(|&g| g != f && self.le(g, f)))
            .collect()
    }

    /// Hasse diagram with nodes labeled by ω-support.
    pub fn to_dot(&self, engine: &TypeEngine) -> String {
        let space = engine.space().space();
        let mut out = String::from("digraph idempotents {\n  rankdir=BT;\n");
        for (i, e) in self.elements.iter().enumerate() {
            let label = if e.support.is_empty() {
                "0".to_string()
            } else {
                format!("ω·{}", space.set_label(e.support))
            };
            out.push_str(&format!("  n{i} [label=\"{label}\"];\n"));
        }
        for (a, b) in self.order.covers() {
            out.push_str(&format!("  n{a} -> n{b};\n"));
        }
        out.push_str("}\n");
        out
    }

    /// The largest idempotent below `alpha`.
    pub fn idempotent_of(&self, engine: &TypeEngine, alpha: &AbarElement) -> Result<usize> {
        let n = engine.num_atoms();
        let mut below = Vec::new();
        for (i, e) in self.elements.iter().enumerate() {
            let d = engine.decide_leq(&e.element(n), alpha)?;
            if decided(d.verdict, "idempotent below a type")? {
                below.push(i);
            }
        }
        let maxima: Vec<usize> = below
            .iter()
            .copied()
            .filter(|&i| below.iter().all(|&j| self.le(j, i)))
            .collect();
        match maxima.as_slice() {
            [one] => Ok(*one),
            [] => Err(Error::Contract("no idempotent below the type".into())),
            _ => Err(Error::Ambiguous("several maximal idempotents below the type".into())),
        }
    }

    /// The scale `e` with `α ∈ 𝒯ₑ`, after checking `e ⪯ α` and `f ⋠ α`
    /// for every idempotent `f` strictly above `e`.
    pub fn isotropy_decompose(&self, engine: &TypeEngine, alpha: &AbarElement) -> Result<ScaleMembership> {
        let n = engine.num_atoms();
        let e = self.idempotent_of(engine, alpha)?;
        for f in (0..self.len()).filter(|&f| f != e && self.le(e, f)) {
            let d = engine.decide_leq(&self.elements[f].element(n), alpha)?;
            if decided(d.verdict, "idempotent above the scale")? {
                return Err(Error::Contract(format!(
                    "idempotent {:?} lies below the type but above its scale",
                    self.elements[f].support
                )));
            }
        }
        Ok(ScaleMembership {
            scale: e,
            element: engine.omega_normalize(alpha),
        })
    }

    /// Brute-force `max [E ∩ F]` over representatives with finite
    /// multiplicities at most `bound` (plus ω).
    pub fn meet_by_realizations(&self, engine: &TypeEngine, a: usize, b: usize, bound: u32) -> Result<usize> {
        let n = engine.num_atoms();
        let e = self.elements[a].element(n);
        let f = self.elements[b].element(n);
        let box_elems = box_elements(n, bound);
        let mut reps_e = Vec::new();
        let mut reps_f = Vec::new();
        for p in &box_elems {
            if decided(engine.decide_equal(p, &e)?.verdict, "representative")? {
                reps_e.push(p.clone());
            }
            if decided(engine.decide_equal(p, &f)?.verdict, "representative")? {
                reps_f.push(p.clone());
            }
        }
        let mut best: Option<AbarElement> = None;
        for p in &reps_e {
            for q in &reps_f {
                let m = engine.omega_normalize(&componentwise_min(p, q));
                best = match best {
                    None => Some(m),
                    Some(cur) => {
                        let up = decided(engine.decide_leq(&cur, &m)?.verdict, "meet candidates")?;
                        Some(if up { m } else { cur })
                    }
                };
            }
        }
        let best = best.ok_or_else(|| Error::Contract("no representatives found".into()))?;
        for p in &reps_e {
            for q in &reps_f {
                let m = engine.omega_normalize(&componentwise_min(p, q));
                if !decided(engine.decide_leq(&m, &best)?.verdict, "meet maximum")? {
                    return Err(Error::Ambiguous("realization meets have no maximum".into()));
                }
            }
        }
        self.index_of(engine.omega_normalize(&best).omega())
            .filter(|_| best.finite().iter().all(|&m| m == 0))
            .ok_or_else(|| Error::Contract("realization meet is not idempotent".into()))
    }
}

/// Every element with finite multiplicities at most `bound` or ω.
pub fn box_elements(n: usize, bound: u32) -> Vec<AbarElement> {
    let base = bound as usize + 2;
    let total = base.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut finite = vec![0u32; n];
            let mut omega = AtomSet::EMPTY;
            for (a, slot) in finite.iter_mut().enumerate() {
                let d = code % base;
                code /= base;
                if d == base - 1 {
                    omega = omega.with(a);
                } else {
                    *slot = d as u32;
                }
            }
            AbarElement::from_parts(finite, omega)
        })
        .collect()
}

/// Intersection of representatives, `ω ∧ ω = ω`.
pub fn componentwise_min(p: &AbarElement, q: &AbarElement) -> AbarElement {
    let n = p.num_atoms();
    let value = |x: &AbarElement, a: usize| {
        if x.omega().contains(a) {
            None
        } else {
            Some(x.finite()[a])
        }
    };
    let mut finite = vec![0u32; n];
    let mut omega = AtomSet::EMPTY;
    for (a, slot) in finite.iter_mut().enumerate() {
        match (value(p, a), value(q, a)) {
            (None, None) => omega = omega.with(a),
            (Some(x), None) | (None, Some(x)) => *slot = x,
            (Some(x), Some(y)) => *slot = x.min(y),
        }
    }
    AbarElement::from_parts(finite, omega)
}

/// A type together with its certified scale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaleMembership {
    pub scale: usize,
    pub element: AbarElement,
}

/// `plus − minus` in the Grothendieck group of the isotropy monoid at
/// `scale`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantityElement {
    pub scale: usize,
    pub plus: AbarElement,
    pub minus: AbarElement,
}

/// Arithmetic in the quantity space of one space.
pub struct QuantitySpace<'a> {
    pub engine: &'a TypeEngine,
    pub lattice: &'a IdempotentLattice,
}

impl<'a> QuantitySpace<'a> {
    pub fn new(engine: &'a TypeEngine, lattice: &'a IdempotentLattice) -> Self {
        Self { engine, lattice }
    }

    fn unit(&self, scale: usize) -> AbarElement {
        self.lattice.elements[scale].element(self.engine.num_atoms())
    }

    pub fn zero(&self, scale: usize) -> QuantityElement {
        QuantityElement {
            scale,
            plus: self.unit(scale),
            minus: self.unit(scale),
        }
    }

    /// `a − b` for `a, b` in one isotropy monoid.
    pub fn grothendieck_diff(&self, a: &ScaleMembership, b: &ScaleMembership) -> Result<QuantityElement> {
        if a.scale != b.scale {
            return Err(Error::Contract("difference of types at different scales".into()));
        }
        Ok(QuantityElement {
            scale: a.scale,
            plus: a.element.clone(),
            minus: b.element.clone(),
        })
    }

    /// `(a, b) ~ (c, d) ⟺ a + d = c + b`.
    pub fn quantity_eq(&self, x: &QuantityElement, y: &QuantityElement) -> Result<bool> {
        if x.scale != y.scale {
            return Ok(false);
        }
        let l = self.engine.omega_normalize(&x.plus.add(&y.minus)?);
        let r = self.engine.omega_normalize(&y.plus.add(&x.minus)?);
        decided(self.engine.decide_equal(&l, &r)?.verdict, "quantity equality")
    }

    /// Sums land at the join of the scales.
    pub fn quantity_add(&self, x: &QuantityElement, y: &QuantityElement) -> Result<QuantityElement> {
        let scale = self.lattice.join(self.engine, x.scale, y.scale)?;
        let unit = self.unit(scale);
        let plus = self.engine.omega_normalize(&x.plus.add(&y.plus)?.add(&unit)?);
        let minus = self.engine.omega_normalize(&x.minus.add(&y.minus)?.add(&unit)?);
        Ok(QuantityElement { scale, plus, minus })
    }

    pub fn quantity_neg(&self, x: &QuantityElement) -> QuantityElement {
        QuantityElement {
            scale: x.scale,
            plus: x.minus.clone(),
            minus: x.plus.clone(),
        }
    }

    /// `α ↦ α − e` in the group of its scale.
    pub fn embed(&self, alpha: &TarskiType) -> Result<QuantityElement> {
        let m = self.lattice.isotropy_decompose(self.engine, alpha.representative())?;
        Ok(QuantityElement {
            scale: m.scale,
            plus: m.element,
            minus: self.unit(m.scale),
        })
    }

    pub fn render(&self, x: &QuantityElement) -> String {
        let e = self.unit(x.scale);
        format!(
            "{} ⊕ ({} − {})",
            self.engine.render(&e),
            self.engine.render(&x.plus),
            self.engine.render(&x.minus)
        )
    }
}
