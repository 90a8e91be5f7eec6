//! Eventually periodic subsets of ℤ: a residue pattern modulo `M` with
//! finitely many points added or removed.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `n ∈ S ⟺ n ∈ add ∨ (n mod M ∈ residues ∧ n ∉ remove)`.
///
/// Kept normalized: `M` is the least period of the pattern, `add` avoids
/// the pattern and `remove` lies inside it, so equal sets have equal values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawEpSet")]
pub struct EpSet {
    #[serde(rename = "mod")]
    modulus: u64,
    residues: BTreeSet<u64>,
    add: BTreeSet<i64>,
    remove: BTreeSet<i64>,
}

#[derive(Deserialize)]
struct RawEpSet {
    #[serde(rename = "mod")]
    modulus: u64,
    #[serde(default)]
    residues: Vec<u64>,
    #[serde(default)]
    add: Vec<i64>,
    #[serde(default)]
    remove: Vec<i64>,
}

impl TryFrom<RawEpSet> for EpSet {
    type Error = Error;

    fn try_from(r: RawEpSet) -> Result<Self> {
        Self::new(r.modulus, r.residues, r.add, r.remove)
    }
}

impl EpSet {
    pub fn new(
        modulus: u64,
        residues: impl IntoIterator<Item = u64>,
        add: impl IntoIterator<Item = i64>,
        remove: impl IntoIterator<Item = i64>,
    ) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Malformed("modulus must be positive".into()));
        }
        let residues: BTreeSet<u64> = residues.into_iter().collect();
        if residues.iter().any(|&r| r >= modulus) {
            return Err(Error::Malformed(format!("residue out of range mod {modulus}")));
        }
        let raw = Self {
            modulus,
            residues,
            add: add.into_iter().collect(),
            remove: remove.into_iter().collect(),
        };
        Ok(raw.normalized())
    }

    pub fn empty() -> Self {
        Self::new(1, [], [], []).expect("valid")
    }

    pub fn all() -> Self {
        Self::new(1, [0], [], []).expect("valid")
    }

    /// `{n : n ≡ r mod m}`.
    pub fn residue_class(m: u64, r: i64) -> Self {
        Self::new(m, [r.rem_euclid(m as i64) as u64], [], []).expect("valid")
    }

    pub fn finite(points: impl IntoIterator<Item = i64>) -> Self {
        Self::new(1, [], points, []).expect("valid")
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn periodic(&self, n: i64) -> bool {
        self.residues.contains(&(n.rem_euclid(self.modulus as i64) as u64))
    }

    pub fn contains(&self, n: i64) -> bool {
        self.add.contains(&n) || (self.periodic(n) && !self.remove.contains(&n))
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty() && self.add.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.residues.is_empty()
    }

    fn normalized(self) -> Self {
        let m = self.modulus;
        let period = (1..=m)
            .filter(|d| m.is_multiple_of(*d))
            .find(|&d| (0..m).all(|r| self.residues.contains(&r) == self.residues.contains(&((r + d) % m))))
            .expect("m is a period");
        let residues: BTreeSet<u64> = self.residues.iter().filter(|&&r| r < period).copied().collect();
        let pattern = |n: i64| residues.contains(&(n.rem_euclid(period as i64) as u64));
        let points: BTreeSet<i64> = self.add.union(&self.remove).copied().collect();
        let mut add = BTreeSet::new();
        let mut remove = BTreeSet::new();
        for n in points {
            match (self.contains(n), pattern(n)) {
                (true, false) => {
                    add.insert(n);
                }
                (false, true) => {
                    remove.insert(n);
                }
                _ => {}
            }
        }
        Self {
            modulus: period,
            residues,
            add,
            remove,
        }
    }

    fn combine(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let m = self.modulus.lcm(&other.modulus);
        let residues = (0..m).filter(|&r| op(self.periodic(r as i64), other.periodic(r as i64)));
        let points: BTreeSet<i64> = self
            .add
            .iter()
            .chain(&self.remove)
            .chain(&other.add)
            .chain(&other.remove)
            .copied()
            .collect();
        let mut add = Vec::new();
        let mut remove = Vec::new();
        for &n in &points {
            let want = op(self.contains(n), other.contains(n));
            let pat = op(self.periodic(n), other.periodic(n));
            if want && !pat {
                add.push(n);
            } else if !want && pat {
                remove.push(n);
            }
        }
        Self::new(m, residues, add, remove).expect("valid")
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

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.inter(other).is_empty()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.minus(other).is_empty()
    }

    /// `S + k`.
    pub fn translate(&self, k: i64) -> Self {
        let m = self.modulus as i64;
        Self {
            modulus: self.modulus,
            residues: self
                .residues
                .iter()
                .map(|&r| (r as i64 + k).rem_euclid(m) as u64)
                .collect(),
            add: self.add.iter().map(|n| n + k).collect(),
            remove: self.remove.iter().map(|n| n + k).collect(),
        }
    }

    /// `{k·n + c : n ∈ S}` for `k ≥ 1`.
    pub fn affine_image(&self, k: u64, c: i64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Malformed("affine factor must be positive".into()));
        }
        let m = self.modulus * k;
        let ki = k as i64;
        let residues = self
            .residues
            .iter()
            .map(|&r| ((r as i64) * ki + c).rem_euclid(m as i64) as u64);
        let add = self.add.iter().map(|n| n * ki + c);
        let remove = self.remove.iter().map(|n| n * ki + c);
        Self::new(m, residues, add, remove)
    }

    /// Members inside `[lo, hi]`.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<i64> {
        (lo..=hi).filter(|&n| self.contains(n)).collect()
    }
}

impl fmt::Display for EpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let res: Vec<String> = self.residues.iter().map(|r| r.to_string()).collect();
        write!(f, "{{{} mod {}}}", res.join(","), self.modulus)?;
        if !self.add.is_empty() {
            write!(f, " ∪ {:?}", self.add)?;
        }
        if !self.remove.is_empty() {
            write!(f, " ∖ {:?}", self.remove)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn evens() -> EpSet {
        EpSet::residue_class(2, 0)
    }

    #[test]
    fn basic_identities() {
        let odds = EpSet::residue_class(2, 1);
        assert_eq!(evens().union(&odds), EpSet::all());
        assert_eq!(evens().translate(1), odds);
        let punctured = evens().minus(&EpSet::finite([0]));
        assert!(!punctured.contains(0) && punctured.contains(2));
        assert_eq!(punctured.union(&EpSet::finite([0])), evens());
        assert_eq!(EpSet::residue_class(4, 0).union(&EpSet::residue_class(4, 2)), evens());
        assert_eq!(EpSet::all().affine_image(2, 1).unwrap(), odds);
        assert!(EpSet::new(0, [], [], []).is_err());
    }

    fn arb_set() -> impl Strategy<Value = EpSet> {
        (
            1u64..7,
            proptest::collection::vec(any::<bool>(), 6),
            proptest::collection::vec(-12i64..12, 0..4),
            proptest::collection::vec(-12i64..12, 0..4),
        )
            .prop_map(|(m, bits, add, remove)| {
                let res = (0..m).filter(|&r| bits[r as usize]);
                EpSet::new(m, res, add, remove).unwrap()
            })
    }

    fn window(s: &EpSet) -> Vec<i64> {
        s.window(-60, 60)
    }

    proptest! {
        #[test]
        fn boolean_algebra(a in arb_set(), b in arb_set(), c in arb_set(), k in -9i64..9) {
            prop_assert_eq!(a.union(&b).union(&c), a.union(&b.union(&c)));
            prop_assert_eq!(a.union(&b).complement(), a.complement().inter(&b.complement()));
            prop_assert_eq!(a.inter(&b).complement(), a.complement().union(&b.complement()));
            prop_assert_eq!(a.union(&b).translate(k), a.translate(k).union(&b.translate(k)));
            prop_assert_eq!(a.complement().translate(k), a.translate(k).complement());
            prop_assert_eq!(a.translate(k).translate(-k), a.clone());
        }

        #[test]
        fn normal_form_is_extensional(a in arb_set(), b in arb_set()) {
            // equal on a window longer than both periods plus patches means equal
            prop_assert_eq!(a == b, window(&a) == window(&b));
            let u = a.union(&b);
            for n in -60..=60 {
                prop_assert_eq!(u.contains(n), a.contains(n) || b.contains(n));
            }
        }
    }
}
