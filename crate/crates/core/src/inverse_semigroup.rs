//! Finite inverse semigroups: partial bijections, abstract multiplication
//! tables, weak inverses, the natural partial order and the Wagner–Preston
//! representation.
//!
//! Composition convention: `compose(g, f)` applies `f` first and then `g`.
//! Abstract tables follow the same convention when they come from maps, so
//! `mul(s, t)` corresponds to `s ∘ t`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Default element cap for [`closure`].
pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

/// An injective partial function on `{0, .., carrier - 1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialBijection {
    carrier: usize,
    map: Vec<Option<usize>>,
}

impl PartialBijection {
    pub fn new(carrier: usize, map: Vec<Option<usize>>) -> Result<Self> {
        if map.len() != carrier {
            return Err(Error::DimensionMismatch {
                expected: carrier,
                found: map.len(),
            });
        }
        let mut seen: Vec<Option<usize>> = vec![None; carrier];
        for (x, y) in map.iter().enumerate() {
            if let Some(y) = *y {
                if y >= carrier {
                    return Err(Error::OutOfRange {
                        value: y,
                        bound: carrier,
                    });
                }
                if let Some(prev) = seen[y] {
                    return Err(Error::NotInjective {
                        first: prev,
                        second: x,
                        image: y,
                    });
                }
                seen[y] = Some(x);
            }
        }
        Ok(Self { carrier, map })
    }

    pub fn from_pairs(carrier: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut map = vec![None; carrier];
        for &(x, y) in pairs {
            if x >= carrier {
                return Err(Error::OutOfRange {
                    value: x,
                    bound: carrier,
                });
            }
            if map[x].is_some_and(|old| old != y) {
                return Err(Error::Malformed(format!("point {x} mapped twice")));
            }
            map[x] = Some(y);
        }
        Self::new(carrier, map)
    }

    pub fn identity(carrier: usize) -> Self {
        Self {
            carrier,
            map: (0..carrier).map(Some).collect(),
        }
    }

    pub fn empty(carrier: usize) -> Self {
        Self {
            carrier,
            map: vec![None; carrier],
        }
    }

    /// Identity restricted to `points`.
    pub fn partial_identity(carrier: usize, points: &[usize]) -> Result<Self> {
        let pairs: Vec<_> = points.iter().map(|&p| (p, p)).collect();
        Self::from_pairs(carrier, &pairs)
    }

    pub fn carrier(&self) -> usize {
        self.carrier
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.map.get(x).copied().flatten()
    }

    pub fn as_slice(&self) -> &[Option<usize>] {
        &self.map
    }

    pub fn domain(&self) -> Vec<usize> {
        (0..self.carrier).filter(|&x| self.map[x].is_some()).collect()
    }

    pub fn image(&self) -> Vec<usize> {
        let mut img: Vec<usize> = self.map.iter().flatten().copied().collect();
        img.sort_unstable();
        img
    }

    pub fn graph(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.map.iter().enumerate().filter_map(|(x, y)| y.map(|y| (x, y)))
    }

    /// `g ∘ f`, defined on `f⁻¹(Dom g ∩ Im f)`.
    pub fn compose(g: &Self, f: &Self) -> Result<Self> {
        if g.carrier != f.carrier {
            return Err(Error::DimensionMismatch {
                expected: f.carrier,
                found: g.carrier,
            });
        }
        let map = f.map.iter().map(|y| y.and_then(|y| g.map[y])).collect();
        Ok(Self {
            carrier: f.carrier,
            map,
        })
    }

    pub fn invert(&self) -> Self {
        let mut map = vec![None; self.carrier];
        for (x, y) in self.graph() {
            map[y] = Some(x);
        }
        Self {
            carrier: self.carrier,
            map,
        }
    }

    /// Idempotent partial bijections are exactly partial identities.
    pub fn is_idempotent(&self) -> bool {
        self.graph().all(|(x, y)| x == y)
    }

    /// Graph inclusion `self ⊆ other`.
    pub fn is_restriction_of(&self, other: &Self) -> bool {
        self.carrier == other.carrier && self.graph().all(|(x, y)| other.map[x] == Some(y))
    }

    /// True iff the graph union `f ∪ g` is again a partial bijection.
    ///
    /// Checked through the two-sided criterion: both `f⁻¹ ∘ g` and
    /// `f ∘ g⁻¹` are partial identities.
    pub fn is_compatible(f: &Self, g: &Self) -> Result<bool> {
        let left = Self::compose(&f.invert(), g)?;
        let right = Self::compose(f, &g.invert())?;
        Ok(left.is_idempotent() && right.is_idempotent())
    }

    /// Graph union of a pairwise compatible family.
    pub fn union_compatible(family: &[Self]) -> Result<Self> {
        let Some(first) = family.first() else {
            return Err(Error::Malformed("empty family".into()));
        };
        let carrier = first.carrier;
        for (i, f) in family.iter().enumerate() {
            if f.carrier != carrier {
                return Err(Error::DimensionMismatch {
                    expected: carrier,
                    found: f.carrier,
                });
            }
            for (j, g) in family.iter().enumerate().skip(i + 1) {
                if !Self::is_compatible(f, g)? {
                    return Err(Error::Incompatible { first: i, second: j });
                }
            }
        }
        let mut map = vec![None; carrier];
        for f in family {
            for (x, y) in f.graph() {
                map[x] = Some(y);
            }
        }
        Self::new(carrier, map)
    }
}

impl fmt::Debug for PartialBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (x, y)) in self.graph().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}↦{y}")?;
        }
        write!(f, "}}/{}", self.carrier)
    }
}

/// Raw, unvalidated monoid multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct MonoidTable {
    pub order: usize,
    pub unit: usize,
    pub mul: Vec<Vec<usize>>,
    #[serde(default)]
    pub labels: Vec<String>,
}

impl MonoidTable {
    pub fn trivial() -> Self {
        Self {
            order: 1,
            unit: 0,
            mul: vec![vec![0]],
            labels: vec!["1".into()],
        }
    }

    pub fn label(&self, s: usize) -> String {
        self.labels.get(s).cloned().unwrap_or_else(|| s.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableFailure {
    Shape(String),
    NotAssociative { a: usize, b: usize, c: usize },
    UnitFails { s: usize },
    NotRegular { s: usize },
    NonUniqueInverse { s: usize, first: usize, second: usize },
    IdempotentsDoNotCommute { e: usize, f: usize },
}

impl fmt::Display for TableFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableFailure::Shape(msg) => write!(f, "shape: {msg}"),
            TableFailure::NotAssociative { a, b, c } => {
                write!(f, "({a}·{b})·{c} ≠ {a}·({b}·{c})")
            }
            TableFailure::UnitFails { s } => write!(f, "unit is not neutral for {s}"),
            TableFailure::NotRegular { s } => write!(f, "{s} has no weak inverse"),
            TableFailure::NonUniqueInverse { s, first, second } => {
                write!(f, "{s} has weak inverses {first} and {second}")
            }
            TableFailure::IdempotentsDoNotCommute { e, f: g } => {
                write!(f, "idempotents {e} and {g} do not commute")
            }
        }
    }
}

/// Result of [`check_inverse_monoid`]. Never panics on malformed input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableReport {
    pub failures: Vec<TableFailure>,
    pub star: Option<Vec<usize>>,
}

impl TableReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn check_inverse_monoid(table: &MonoidTable) -> TableReport {
    let n = table.order;
    let mut failures = Vec::new();
    if n == 0 {
        failures.push(TableFailure::Shape("order must be positive".into()));
    }
    if table.unit >= n.max(1) {
        failures.push(TableFailure::Shape(format!("unit {} out of range", table.unit)));
    }
    if table.mul.len() != n || table.mul.iter().any(|row| row.len() != n) {
        failures.push(TableFailure::Shape(format!("mul must be {n}×{n}")));
    } else if let Some((i, j)) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| table.mul[i][j] >= n)
    {
        failures.push(TableFailure::Shape(format!(
            "entry ({i},{j}) = {} out of range",
            table.mul[i][j]
        )));
    }
    if !table.labels.is_empty() && table.labels.len() != n {
        failures.push(TableFailure::Shape("labels length differs from order".into()));
    }
    if !failures.is_empty() {
        return TableReport { failures, star: None };
    }

    let m = |a: usize, b: usize| table.mul[a][b];
    'assoc: for a in 0..n {
        for b in 0..n {
            let ab = m(a, b);
            for c in 0..n {
                if m(ab, c) != m(a, m(b, c)) {
                    failures.push(TableFailure::NotAssociative { a, b, c });
                    break 'assoc;
                }
            }
        }
    }
    for s in 0..n {
        if m(table.unit, s) != s || m(s, table.unit) != s {
            failures.push(TableFailure::UnitFails { s });
        }
    }

    let mut star = vec![usize::MAX; n];
    for s in 0..n {
        let inverses: Vec<usize> = (0..n).filter(|&t| m(m(s, t), s) == s && m(m(t, s), t) == t).collect();
        match inverses.as_slice() {
            [] => failures.push(TableFailure::NotRegular { s }),
            [t] => star[s] = *t,
            [first, second, ..] => failures.push(TableFailure::NonUniqueInverse {
                s,
                first: *first,
                second: *second,
            }),
        }
    }

    let idempotents: Vec<usize> = (0..n).filter(|&e| m(e, e) == e).collect();
    for (i, &e) in idempotents.iter().enumerate() {
        for &f in &idempotents[i + 1..] {
            if m(e, f) != m(f, e) {
                failures.push(TableFailure::IdempotentsDoNotCommute { e, f });
            }
        }
    }

    let star = failures.is_empty().then_some(star);
    TableReport { failures, star }
}

/// A validated finite inverse monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseMonoidTable {
    table: MonoidTable,
    star: Vec<usize>,
}

impl InverseMonoidTable {
    pub fn new(table: MonoidTable) -> Result<Self> {
        let report = check_inverse_monoid(&table);
        match report.star {
            Some(star) => Ok(Self { table, star }),
            None => Err(Error::InvalidTable(
                report
                    .failures
                    .iter()
                    .map(|f| f.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            )),
        }
    }

    pub fn trivial() -> Self {
        Self {
            table: MonoidTable::trivial(),
            star: vec![0],
        }
    }

    pub fn order(&self) -> usize {
        self.table.order
    }

    pub fn unit(&self) -> usize {
        self.table.unit
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table.mul[a][b]
    }

    pub fn star(&self, s: usize) -> usize {
        self.star[s]
    }

    pub fn table(&self) -> &MonoidTable {
        &self.table
    }

    pub fn label(&self, s: usize) -> String {
        self.table.label(s)
    }

    pub fn is_idempotent(&self, s: usize) -> bool {
        self.mul(s, s) == s
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.order()).filter(|&s| self.is_idempotent(s)).collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    /// Domain idempotent `s* s`.
    pub fn domain_idempotent(&self, s: usize) -> usize {
        self.mul(self.star(s), s)
    }

    /// Codomain idempotent `s s*`.
    pub fn codomain_idempotent(&self, s: usize) -> usize {
        self.mul(s, self.star(s))
    }

    pub fn is_group(&self) -> bool {
        self.idempotents() == vec![self.unit()]
    }
}

/// Closure of a set of partial bijections under composition and inversion,
/// together with the identity. Element 0 of the result is the identity and
/// generators follow in their given order (duplicates removed).
pub fn closure(
    generators: &[PartialBijection],
    carrier: usize,
    cap: usize,
) -> Result<(InverseMonoidTable, Vec<PartialBijection>)> {
    for g in generators {
        if g.carrier() != carrier {
            return Err(Error::DimensionMismatch {
                expected: carrier,
                found: g.carrier(),
            });
        }
    }
    let mut elements: Vec<PartialBijection> = Vec::new();
    let mut index: HashMap<PartialBijection, usize> = HashMap::new();
    let mut queue = VecDeque::new();

    let mut push =
        |x: PartialBijection, elements: &mut Vec<PartialBijection>, queue: &mut VecDeque<usize>| -> Result<()> {
            if index.contains_key(&x) {
                return Ok(());
            }
            if elements.len() >= cap {
                return Err(Error::ClosureExplosion {
                    count: elements.len(),
                    cap,
                });
            }
            index.insert(x.clone(), elements.len());
            queue.push_back(elements.len());
            elements.push(x);
            Ok(())
        };

    push(PartialBijection::identity(carrier), &mut elements, &mut queue)?;
    for g in generators {
        push(g.clone(), &mut elements, &mut queue)?;
        push(g.invert(), &mut elements, &mut queue)?;
    }
    while let Some(k) = queue.pop_front() {
        let mut j = 0;
        while j < elements.len() {
            let a = PartialBijection::compose(&elements[k], &elements[j])?;
            let b = PartialBijection::compose(&elements[j], &elements[k])?;
            push(a, &mut elements, &mut queue)?;
            push(b, &mut elements, &mut queue)?;
            j += 1;
        }
    }
    let table = table_of_maps(&elements)?;
    Ok((InverseMonoidTable::new(table)?, elements))
}

/// Multiplication table of a family of partial bijections closed under
/// composition; element 0 must be the identity.
pub fn table_of_maps(elements: &[PartialBijection]) -> Result<MonoidTable> {
    let index: HashMap<&PartialBijection, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let n = elements.len();
    let mut mul = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let p = PartialBijection::compose(&elements[i], &elements[j])?;
            mul[i][j] = *index
                .get(&p)
                .ok_or_else(|| Error::Malformed("family not closed under composition".into()))?;
        }
    }
    let unit = elements
        .iter()
        .position(|e| *e == PartialBijection::identity(e.carrier()))
        .ok_or_else(|| Error::Malformed("family lacks the identity".into()))?;
    Ok(MonoidTable {
        order: n,
        unit,
        mul,
        labels: elements.iter().map(|e| format!("{e:?}")).collect(),
    })
}

/// `Σ_k C(n,k)² k!`, the number of partial bijections of an `n`-set.
pub fn symmetric_inverse_monoid_size(n: usize) -> u128 {
    let mut total: u128 = 0;
    for k in 0..=n {
        let c = binomial(n as u128, k as u128);
        total = total.saturating_add(c.saturating_mul(c).saturating_mul(factorial(k as u128)));
    }
    total
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn factorial(k: u128) -> u128 {
    (1..=k).fold(1u128, |acc, i| acc.saturating_mul(i))
}

/// The full symmetric inverse monoid `I(n)` with the identity as element 0.
pub fn symmetric_inverse_monoid(n: usize, cap: usize) -> Result<(InverseMonoidTable, Vec<PartialBijection>)> {
    if n == 0 {
        return Err(Error::OutOfRange { value: 0, bound: 1 });
    }
    let size = symmetric_inverse_monoid_size(n);
    if size > cap as u128 {
        return Err(Error::SizeOverflow { n, size, cap });
    }
    let mut elements = vec![PartialBijection::identity(n)];
    let mut current = vec![None; n];
    enumerate_partial_bijections(n, 0, &mut vec![false; n], &mut current, &mut elements);
    let table = table_of_maps(&elements)?;
    Ok((InverseMonoidTable::new(table)?, elements))
}

fn enumerate_partial_bijections(
    n: usize,
    x: usize,
    used: &mut Vec<bool>,
    current: &mut Vec<Option<usize>>,
    out: &mut Vec<PartialBijection>,
) {
    if x == n {
        let p = PartialBijection {
            carrier: n,
            map: current.clone(),
        };
        if p != out[0] {
            out.push(p);
        }
        return;
    }
    current[x] = None;
    enumerate_partial_bijections(n, x + 1, used, current, out);
    for y in 0..n {
        if !used[y] {
            used[y] = true;
            current[x] = Some(y);
            enumerate_partial_bijections(n, x + 1, used, current, out);
            used[y] = false;
        }
    }
    current[x] = None;
}

/// The natural partial order `s ≤ t ⟺ s = t e` for some idempotent `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaturalOrder {
    leq: Vec<Vec<bool>>,
}

impl NaturalOrder {
    pub fn leq(&self, s: usize, t: usize) -> bool {
        self.leq[s][t]
    }

    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }
}

pub fn natural_partial_order(monoid: &InverseMonoidTable) -> NaturalOrder {
    let n = monoid.order();
    let idempotents = monoid.idempotents();
    let mut leq = vec![vec![false; n]; n];
    for t in 0..n {
        for &e in &idempotents {
            leq[monoid.mul(t, e)][t] = true;
        }
    }
    NaturalOrder { leq }
}

/// Wagner–Preston representation on the carrier `S`: `ρ_s(t) = t s` with
/// domain `S s*`.
///
/// Since `ρ_s` multiplies on the right, `ρ_{st} = ρ_t ∘ ρ_s` under the
/// apply-right-first convention of [`PartialBijection::compose`].
pub fn wagner_preston(monoid: &InverseMonoidTable) -> Vec<PartialBijection> {
    let n = monoid.order();
    monoid
        .elements()
        .map(|s| {
            let s_star = monoid.star(s);
            let mut map = vec![None; n];
            for u in 0..n {
                let t = monoid.mul(u, s_star);
                map[t] = Some(monoid.mul(t, s));
            }
            PartialBijection { carrier: n, map }
        })
        .collect()
}
