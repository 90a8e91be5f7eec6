//! Property suites run over corpus spaces: algebraic laws of type monoids,
//! quantity spaces, limit laws of the Tarski measure, and agreement of
//! paradoxicality with measure existence.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::CorpusSpace;
use crate::error::{Error, Result};
use crate::lattice_quantity::{check_distributive, enumerate_idempotents, QuantityElement, QuantitySpace};
use crate::measures::{continuity_suite, cross_check_tarski, LawTally};
use crate::statmeas::{compose_morphisms, enumerate_morphisms, identity_morphism, AtomSet, StatMorphism, StatSpace};
use crate::type_engine::{morphism_type_map, AbarElement, Decision, TypeEngine, Verdict};

/// Tally of one law over a suite.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    pub unknown: usize,
    /// First few failures.
    pub failures: Vec<String>,
}

impl Check {
    fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            ..Default::default()
        }
    }

    fn record(&mut self, outcome: Option<bool>, context: impl FnOnce() -> String) {
        match outcome {
            Some(true) => self.passed += 1,
            Some(false) => {
                self.failed += 1;
                if self.failures.len() < 5 {
                    self.failures.push(context());
                }
            }
            None => self.unknown += 1,
        }
    }

    fn absorb(&mut self, t: &LawTally) {
        self.failed += t.failed;
        self.unknown += t.unknown;
        self.passed += t.checked - t.failed - t.unknown;
    }

    pub fn total(&self) -> usize {
        self.passed + self.failed + self.unknown
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub spaces: usize,
    pub checks: Vec<Check>,
    /// Decisions made, and how many were undecided.
    pub decisions: usize,
    pub unknown_decisions: usize,
    /// Undecided decisions on the named fixture spaces.
    pub fixture_unknowns: usize,
}

impl SuiteReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failed == 0)
    }

    pub fn unknown_rate(&self) -> f64 {
        if self.decisions == 0 {
            0.0
        } else {
            self.unknown_decisions as f64 / self.decisions as f64
        }
    }

    pub fn render(&self) -> String {
        let mut out = format!("suite {} over {} spaces\n", self.suite, self.spaces);
        for c in &self.checks {
            out.push_str(&format!(
                "  {:<28} passed {:>6}  failed {:>3}  unknown {:>3}\n",
                c.name, c.passed, c.failed, c.unknown
            ));
            for f in &c.failures {
                out.push_str(&format!("      {f}\n"));
            }
        }
        if self.decisions > 0 {
            out.push_str(&format!(
                "  decisions {}  unknown {} ({:.2}%)  fixture unknowns {}\n",
                self.decisions,
                self.unknown_decisions,
                100.0 * self.unknown_rate(),
                self.fixture_unknowns
            ));
        }
        out
    }
}

/// Records every decision and audits its witness.
struct Auditor {
    decisions: usize,
    unknown: usize,
    audit: Check,
}

impl Auditor {
    fn new() -> Self {
        Self {
            decisions: 0,
            unknown: 0,
            audit: Check::new("witness audit"),
        }
    }

    fn equal(&mut self, e: &TypeEngine, p: &AbarElement, q: &AbarElement) -> Result<Decision> {
        let d = e.decide_equal(p, q)?;
        self.note(&d, e.audit_equal(p, q, &d), || format!("{p:?} = {q:?}"));
        Ok(d)
    }

    fn leq(&mut self, e: &TypeEngine, p: &AbarElement, q: &AbarElement) -> Result<Decision> {
        let d = e.decide_leq(p, q)?;
        self.note(&d, e.audit_leq(p, q, &d), || format!("{p:?} ⪯ {q:?}"));
        Ok(d)
    }

    fn note(&mut self, d: &Decision, audit: std::result::Result<(), String>, what: impl FnOnce() -> String) {
        self.decisions += 1;
        if d.verdict == Verdict::Unknown {
            self.unknown += 1;
        }
        match audit {
            Ok(()) => self.audit.record(Some(true), String::new),
            Err(msg) => self.audit.record(Some(false), || format!("{}: {msg}", what())),
        }
    }
}

fn is_fixture(c: &CorpusSpace) -> bool {
    !c.name.starts_with("gen")
}

/// Types of all measurable sets plus a few random elements with
/// multiplicities up to 2 and occasional ω-coordinates.
fn sample_elements(space: &StatSpace, rng: &mut ChaCha8Rng, extra: usize) -> Vec<AbarElement> {
    let n = space.num_atoms();
    let mut out: Vec<AbarElement> = space.measurable_sets().map(|s| AbarElement::of_set(n, s)).collect();
    for _ in 0..extra {
        let mut finite = vec![0u32; n];
        let mut omega = AtomSet::EMPTY;
        for (a, slot) in finite.iter_mut().enumerate() {
            match rng.gen_range(0..8) {
                0..=2 => {}
                3..=5 => *slot = 1,
                6 => *slot = 2,
                _ => omega = omega.with(a),
            }
        }
        out.push(AbarElement::from_parts(finite, omega));
    }
    out
}

fn holds(d: &Decision) -> Option<bool> {
    d.holds()
}

/// Algebraic laws of the type monoid and of the induced maps.
pub fn theorem1_suite(spaces: &[CorpusSpace], seed: u64) -> Result<SuiteReport> {
    let mut commut = Check::new("commutativity");
    let mut antisym = Check::new("antisymmetry");
    let mut cancel = Check::new("cancellation n<=3");
    let mut empty = Check::new("empty set has type 0");
    let mut additive = Check::new("additivity");
    let mut omega_add = Check::new("omega-fold additivity");
    let mut stationary = Check::new("stationarity");
    let mut cofunctor = Check::new("cofunctor laws");
    let mut measurement = Check::new("measurement commutes");
    let mut auditor = Auditor::new();
    let mut fixture_unknowns = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for c in spaces {
        let before = auditor.unknown;
        let e = TypeEngine::new(c.space.clone());
        let n = e.num_atoms();
        let elems = sample_elements(&c.space, &mut rng, 8);
        let norm = |p: &AbarElement| e.omega_normalize(p);

        let zero = e.type_zero().representative().clone();
        let d = auditor.equal(&e, &e.type_of(AtomSet::EMPTY)?.representative().clone(), &zero)?;
        empty.record(holds(&d), || format!("{}: [∅] ≠ 0", c.name));

        for _ in 0..40 {
            let a = &elems[rng.gen_range(0..elems.len())];
            let b = &elems[rng.gen_range(0..elems.len())];
            let ab = norm(&a.add(b)?);
            let ba = norm(&b.add(a)?);
            let d = auditor.equal(&e, &ab, &ba)?;
            commut.record(holds(&d), || format!("{}: {a:?} + {b:?}", c.name));

            let l = auditor.leq(&e, a, b)?;
            let r = auditor.leq(&e, b, a)?;
            if l.verdict == Verdict::Leq && r.verdict == Verdict::Leq {
                let d = auditor.equal(&e, a, b)?;
                antisym.record(holds(&d), || format!("{}: {a:?} ⪯ {b:?} ⪯ {a:?}", c.name));
            }

            for k in 2..=3u32 {
                let d = auditor.equal(&e, &norm(&a.scale(k)), &norm(&b.scale(k)))?;
                if d.verdict == Verdict::Equal {
                    let d = auditor.equal(&e, a, b)?;
                    cancel.record(holds(&d), || format!("{}: {k}·{a:?} = {k}·{b:?}", c.name));
                }
            }
        }
        // pairs where the premise of cancellation holds by construction
        for a in &elems {
            let d = auditor.equal(&e, &norm(&a.scale(2)), &norm(&a.add(a)?))?;
            if d.verdict == Verdict::Equal {
                cancel.record(Some(true), String::new);
            }
        }

        let sets: Vec<AtomSet> = c.space.measurable_sets().collect();
        for &a in &sets {
            for &b in sets.iter().filter(|b| b.is_disjoint(a) && b.0 > a.0) {
                let union = e.type_of(a.union(b))?;
                let sum = e.type_add(&e.type_of(a)?, &e.type_of(b)?)?;
                let d = auditor.equal(&e, union.representative(), sum.representative())?;
                additive.record(holds(&d), || format!("{}: [{a:?} ⊔ {b:?}]", c.name));
            }
            let folded = e.type_omega(&e.type_of(a)?)?;
            let pieces = a.iter().try_fold(AbarElement::zero(n), |acc, x| {
                acc.add(&AbarElement::omega_of(n, AtomSet::singleton(x)))
            })?;
            let d = auditor.equal(&e, folded.representative(), &norm(&pieces))?;
            omega_add.record(holds(&d), || format!("{}: ω·[{a:?}]", c.name));
            for s in c.space.monoid().elements() {
                let pre = e.type_of(c.space.pullback(s, a))?;
                let d = auditor.equal(&e, pre.representative(), e.type_of(a)?.representative())?;
                stationary.record(holds(&d), || format!("{}: [s⁻¹A] for s={s}, A={a:?}", c.name));
            }
        }
        if is_fixture(c) {
            fixture_unknowns += auditor.unknown - before;
        }
    }

    // induced maps on small spaces
    let small: Vec<&CorpusSpace> = spaces
        .iter()
        .filter(|c| c.space.space().num_points() <= 4 && c.space.monoid().order() <= 4)
        .collect();
    let mut pairs = 0;
    'outer: for x in &small {
        for y in &small {
            let fs = enumerate_morphisms(&x.space, &y.space);
            if fs.is_empty() {
                continue;
            }
            let ex = TypeEngine::new(x.space.clone());
            let ey = TypeEngine::new(y.space.clone());
            for f in fs.iter().take(3) {
                check_identity_law(&ex, x, &mut cofunctor)?;
                check_measurement(&ex, &ey, f, &mut measurement, &mut auditor)?;
                for z in &small {
                    for g in enumerate_morphisms(&y.space, &z.space).iter().take(2) {
                        check_composite(&ex, z, f, g, &mut cofunctor, &mut auditor)?;
                        pairs += 1;
                    }
                }
                if pairs >= 40 {
                    break 'outer;
                }
            }
        }
    }

    let mut checks = vec![
        commut,
        antisym,
        cancel,
        empty,
        additive,
        omega_add,
        stationary,
        cofunctor,
        measurement,
    ];
    checks.push(auditor.audit);
    Ok(SuiteReport {
        suite: "theorem1".into(),
        spaces: spaces.len(),
        checks,
        decisions: auditor.decisions,
        unknown_decisions: auditor.unknown,
        fixture_unknowns,
    })
}

fn check_identity_law(ex: &TypeEngine, x: &CorpusSpace, law: &mut Check) -> Result<()> {
    let id = morphism_type_map(&identity_morphism(x.space.clone()))?;
    let mut moved = None;
    for p in crate::lattice_quantity::box_elements(ex.num_atoms(), 1) {
        if id.apply(&p)? != p {
            moved = Some(p);
        }
    }
    law.record(Some(moved.is_none()), || format!("{}: 𝒯(id) moves {moved:?}", x.name));
    Ok(())
}

/// `𝒯f([B]) = [f⁻¹B]` for target atoms `B`.
fn check_measurement(
    ex: &TypeEngine,
    ey: &TypeEngine,
    f: &StatMorphism,
    law: &mut Check,
    auditor: &mut Auditor,
) -> Result<()> {
    let tf = morphism_type_map(f)?;
    for b in 0..ey.num_atoms() {
        let tb = ey.type_of(AtomSet::singleton(b))?;
        let image = tf.apply_type(ex, &tb)?;
        let direct = ex.type_of(f.preimage(AtomSet::singleton(b))?)?;
        let d = auditor.equal(ex, image.representative(), direct.representative())?;
        law.record(holds(&d), || format!("atom {b}: 𝒯f[B] ≠ [f⁻¹B]"));
    }
    Ok(())
}

/// `𝒯(g∘f) = 𝒯f ∘ 𝒯g` on box elements of the far target, one tally per
/// pair.
fn check_composite(
    ex: &TypeEngine,
    z: &CorpusSpace,
    f: &StatMorphism,
    g: &StatMorphism,
    law: &mut Check,
    auditor: &mut Auditor,
) -> Result<()> {
    let gf = compose_morphisms(g, f)?;
    let (tf, tg, tgf) = (morphism_type_map(f)?, morphism_type_map(g)?, morphism_type_map(&gf)?);
    let mut outcome = Some(true);
    let mut bad = None;
    for p in crate::lattice_quantity::box_elements(z.space.num_atoms(), 1) {
        let lhs = tgf.apply(&p)?;
        let rhs = tf.apply(&tg.apply(&p)?)?;
        let d = auditor.equal(ex, &ex.omega_normalize(&lhs), &ex.omega_normalize(&rhs))?;
        match holds(&d) {
            Some(true) => {}
            Some(false) => {
                outcome = Some(false);
                bad = Some(p);
            }
            None if outcome == Some(true) => outcome = None,
            None => {}
        }
    }
    law.record(outcome, || format!("{}: 𝒯(g∘f) ≠ 𝒯f∘𝒯g at {bad:?}", z.name));
    Ok(())
}

fn quantity_holds(r: Result<bool>) -> Result<Option<bool>> {
    match r {
        Ok(b) => Ok(Some(b)),
        Err(Error::Undecided(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Quantity spaces: injectivity of the embedding, group laws at every
/// scale, and distributivity of the idempotent lattice.
pub fn theorem2_suite(spaces: &[CorpusSpace], seed: u64, pairs_per_space: usize) -> Result<SuiteReport> {
    let mut inject = Check::new("embedding injective");
    let mut commut = Check::new("quantity addition commutes");
    let mut assoc = Check::new("quantity addition associates");
    let mut group = Check::new("isotropy group axioms");
    let mut distrib = Check::new("idempotents distributive");
    let mut auditor = Auditor::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for c in spaces {
        let e = TypeEngine::new(c.space.clone());
        let lattice = enumerate_idempotents(&e)?;
        distrib.record(Some(check_distributive(&lattice.order).is_ok()), || {
            format!("{}: not distributive", c.name)
        });
        let qs = QuantitySpace::new(&e, &lattice);
        let elems = sample_elements(&c.space, &mut rng, 12);
        let mut embedded: Vec<QuantityElement> = Vec::new();
        for p in &elems {
            embedded.push(qs.embed(&e.type_of_element(p)?)?);
        }
        for _ in 0..pairs_per_space {
            let i = rng.gen_range(0..elems.len());
            let j = rng.gen_range(0..elems.len());
            let d = auditor.equal(&e, &elems[i], &elems[j])?;
            let q = quantity_holds(qs.quantity_eq(&embedded[i], &embedded[j]))?;
            let outcome = match (d.holds(), q) {
                (Some(x), Some(y)) => Some(x == y),
                _ => None,
            };
            inject.record(outcome, || format!("{}: {:?} vs {:?}", c.name, elems[i], elems[j]));
        }
        for _ in 0..10 {
            let x = &embedded[rng.gen_range(0..embedded.len())];
            let y = &embedded[rng.gen_range(0..embedded.len())];
            let z = &embedded[rng.gen_range(0..embedded.len())];
            let xy = qs.quantity_add(x, y)?;
            commut.record(quantity_holds(qs.quantity_eq(&xy, &qs.quantity_add(y, x)?))?, || {
                format!("{}: x + y ≠ y + x", c.name)
            });
            let l = qs.quantity_add(&xy, z)?;
            let r = qs.quantity_add(x, &qs.quantity_add(y, z)?)?;
            assoc.record(quantity_holds(qs.quantity_eq(&l, &r))?, || {
                format!("{}: (x + y) + z", c.name)
            });
        }
        // group axioms inside each Q_e, on differences of sampled members
        for scale in 0..lattice.len() {
            let members: Vec<&QuantityElement> = embedded.iter().filter(|x| x.scale == scale).collect();
            let zero = qs.zero(scale);
            for (k, x) in members.iter().enumerate().take(4) {
                let y = members[(k + 1) % members.len()];
                let diff = QuantityElement {
                    scale,
                    plus: x.plus.clone(),
                    minus: y.plus.clone(),
                };
                let id = quantity_holds(qs.quantity_eq(&qs.quantity_add(&diff, &zero)?, &diff))?;
                group.record(id, || format!("{}: x + 0 ≠ x at scale {scale}", c.name));
                let inv = quantity_holds(qs.quantity_eq(&qs.quantity_add(&diff, &qs.quantity_neg(&diff))?, &zero))?;
                group.record(inv, || format!("{}: x − x ≠ 0 at scale {scale}", c.name));
                let closed = qs.quantity_add(&diff, x)?.scale == scale;
                group.record(Some(closed), || format!("{}: sum leaves scale {scale}", c.name));
            }
        }
    }
    Ok(SuiteReport {
        suite: "theorem2".into(),
        spaces: spaces.len(),
        checks: vec![inject, commut, assoc, group, distrib, auditor.audit],
        decisions: auditor.decisions,
        unknown_decisions: auditor.unknown,
        fixture_unknowns: 0,
    })
}

/// Monotonicity, subadditivity and both continuity laws.
pub fn theorem3_suite(spaces: &[CorpusSpace], seed: u64, schemas: usize) -> Result<SuiteReport> {
    let mut mono = Check::new("monotonicity");
    let mut sub = Check::new("subadditivity");
    let mut below = Check::new("continuity from below");
    let mut above = Check::new("continuity from above");
    for c in spaces {
        let e = TypeEngine::new(c.space.clone());
        let lattice = enumerate_idempotents(&e)?;
        let r = continuity_suite(&e, &lattice, seed, schemas)?;
        mono.absorb(&r.monotonicity);
        sub.absorb(&r.subadditivity);
        below.absorb(&r.from_below);
        above.absorb(&r.from_above);
    }
    Ok(SuiteReport {
        suite: "theorem3".into(),
        spaces: spaces.len(),
        checks: vec![mono, sub, below, above],
        ..Default::default()
    })
}

/// Paradoxicality against existence of a normalized stationary measure.
pub fn tarski_suite(spaces: &[CorpusSpace]) -> Result<SuiteReport> {
    let mut agree = Check::new("tarski agreement");
    let mut null = Check::new("null-type sets excluded");
    let mut measures = Check::new("synthesized measures valid");
    for c in spaces {
        let e = TypeEngine::new(c.space.clone());
        for set in c.space.measurable_sets().filter(|s| !s.is_empty()) {
            let r = cross_check_tarski(&e, set)?;
            if r.null_type {
                null.record(Some(true), String::new);
                continue;
            }
            agree.record(r.agree, || {
                format!(
                    "{}: {} paradox {:?}, measure {}",
                    c.name,
                    c.space.space().set_label(set),
                    r.paradox.verdict,
                    r.synthesis.measure().is_some()
                )
            });
            if let Some(m) = r.synthesis.measure() {
                measures.record(
                    Some(m.check(&c.space).is_ok() && m.value(set) == Some(crate::measures::one())),
                    String::new,
                );
            }
        }
    }
    Ok(SuiteReport {
        suite: "tarski".into(),
        spaces: spaces.len(),
        checks: vec![agree, null, measures],
        ..Default::default()
    })
}

/// Convenience for callers holding bare spaces.
pub fn named(name: &str, space: Arc<StatSpace>) -> CorpusSpace {
    CorpusSpace {
        name: name.into(),
        space,
        generators: Vec::new(),
    }
}
