//! Exact rational feasibility for linear systems.
//!
//! Phase I of the simplex method on a dense `BigRational` tableau with
//! Bland's rule. Infeasible systems come back with Farkas multipliers read
//! off the optimal phase I duals.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::linalg::{q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub relation: Relation,
    pub rhs: Q,
}

/// Constraints over `num_vars` unknowns; `nonneg[j]` adds `x_j ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSystem {
    pub num_vars: usize,
    pub nonneg: Vec<bool>,
    pub constraints: Vec<Constraint>,
}

impl LinearSystem {
    pub fn free(num_vars: usize) -> Self {
        Self {
            num_vars,
            nonneg: vec![false; num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn nonnegative(num_vars: usize) -> Self {
        Self {
            num_vars,
            nonneg: vec![true; num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn add(&mut self, coeffs: Vec<Q>, relation: Relation, rhs: Q) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars, "constraint width");
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self
    }

    pub fn add_int(&mut self, coeffs: &[i64], relation: Relation, rhs: i64) -> &mut Self {
        self.add(coeffs.iter().map(|&c| q(c)).collect(), relation, q(rhs))
    }

    pub fn is_satisfied_by(&self, x: &[Q]) -> bool {
        if x.len() != self.num_vars {
            return false;
        }
        if self.nonneg.iter().zip(x).any(|(&nn, v)| nn && v.is_negative()) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let lhs: Q = c.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Eq => lhs == c.rhs,
                Relation::Ge => lhs >= c.rhs,
            }
        })
    }
}

/// Multipliers `λ` with `λ_i ≥ 0` on `≤` rows, `λ_i ≤ 0` on `≥` rows,
/// `(λᵀA)_j = 0` on free unknowns, `(λᵀA)_j ≥ 0` on nonnegative unknowns and
/// `λᵀb < 0`. No feasible point can exist alongside such `λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct FarkasCertificate {
    pub multipliers: Vec<Q>,
}

impl FarkasCertificate {
    pub fn verify(&self, sys: &LinearSystem) -> bool {
        if self.multipliers.len() != sys.constraints.len() {
            return false;
        }
        for (lam, c) in self.multipliers.iter().zip(&sys.constraints) {
            let ok = match c.relation {
                Relation::Le => !lam.is_negative(),
                Relation::Ge => !lam.is_positive(),
                Relation::Eq => true,
            };
            if !ok {
                return false;
            }
        }
        for j in 0..sys.num_vars {
            let col: Q = self
                .multipliers
                .iter()
                .zip(&sys.constraints)
                .map(|(lam, c)| lam * &c.coeffs[j])
                .sum();
            let ok = if sys.nonneg[j] {
                !col.is_negative()
            } else {
                col.is_zero()
            };
            if !ok {
                return false;
            }
        }
        let lb: Q = self
            .multipliers
            .iter()
            .zip(&sys.constraints)
            .map(|(lam, c)| lam * &c.rhs)
            .sum();
        lb.is_negative()
    }
}

impl fmt::Display for FarkasCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.multipliers.iter().map(|x| x.to_string()).collect();
        write!(f, "λ = [{}]", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Feasibility {
    Feasible(Vec<Q>),
    Infeasible(FarkasCertificate),
}

impl Feasibility {
    pub fn point(&self) -> Option<&[Q]> {
        match self {
            Feasibility::Feasible(x) => Some(x),
            Feasibility::Infeasible(_) => None,
        }
    }
}

enum Column {
    Plus(usize),
    Minus(usize),
    Slack,
    Artificial,
}

pub fn exact_lp_feasible(sys: &LinearSystem) -> Feasibility {
    let m = sys.constraints.len();
    let mut kinds: Vec<Column> = Vec::new();
    for j in 0..sys.num_vars {
        kinds.push(Column::Plus(j));
        if !sys.nonneg[j] {
            kinds.push(Column::Minus(j));
        }
    }
    let structural = kinds.len();
    let mut slack_of_row = vec![None; m];
    for (i, c) in sys.constraints.iter().enumerate() {
        if c.relation != Relation::Eq {
            slack_of_row[i] = Some(kinds.len());
            kinds.push(Column::Slack);
        }
    }
    let first_art = kinds.len();
    for _ in 0..m {
        kinds.push(Column::Artificial);
    }
    let ncols = kinds.len();

    let mut sigma = vec![Q::one(); m];
    let mut tab: Vec<Vec<Q>> = Vec::with_capacity(m);
    for (i, c) in sys.constraints.iter().enumerate() {
        let mut row = vec![Q::zero(); ncols + 1];
        for (col, kind) in kinds[..structural].iter().enumerate() {
            row[col] = match kind {
                Column::Plus(j) => c.coeffs[*j].clone(),
                Column::Minus(j) => -c.coeffs[*j].clone(),
                _ => unreachable!(),
            };
        }
        if let Some(s) = slack_of_row[i] {
            row[s] = if c.relation == Relation::Le { q(1) } else { q(-1) };
        }
        row[ncols] = c.rhs.clone();
        if c.rhs.is_negative() {
            sigma[i] = q(-1);
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        row[first_art + i] = Q::one();
        tab.push(row);
    }
    let mut basis: Vec<usize> = (0..m).map(|i| first_art + i).collect();

    // reduced costs of the phase I objective, last entry is −z
    let mut obj = vec![Q::zero(); ncols + 1];
    for (j, o) in obj.iter_mut().enumerate() {
        let cost = if (first_art..ncols).contains(&j) {
            Q::one()
        } else {
            Q::zero()
        };
        let col_sum: Q = tab.iter().map(|r| r[j].clone()).sum();
        *o = if j == ncols { -col_sum } else { cost - col_sum };
    }

    while let Some(enter) = (0..ncols).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if tab[i][enter].is_positive() {
                let ratio = &tab[i][ncols] / &tab[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (r, _) = leave.expect("phase I objective is bounded below");
        pivot(&mut tab, &mut obj, r, enter);
        basis[r] = enter;
    }

    let z = -obj[ncols].clone();
    if z.is_zero() {
        let mut x = vec![Q::zero(); sys.num_vars];
        for (i, &b) in basis.iter().enumerate() {
            match kinds[b] {
                Column::Plus(j) => x[j] += &tab[i][ncols],
                Column::Minus(j) => x[j] -= &tab[i][ncols],
                _ => {}
            }
        }
        Feasibility::Feasible(x)
    } else {
        let multipliers = (0..m)
            .map(|k| {
                let pi = Q::one() - &obj[first_art + k];
                -pi * &sigma[k]
            })
            .collect();
        Feasibility::Infeasible(FarkasCertificate { multipliers })
    }
}

fn pivot(tab: &mut [Vec<Q>], obj: &mut [Q], r: usize, c: usize) {
    let inv = tab[r][c].recip();
    for x in tab[r].iter_mut() {
        *x *= &inv;
    }
    let pivot_row = tab[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i != r && !row[c].is_zero() {
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
    }
    if !obj[c].is_zero() {
        let f = obj[c].clone();
        for (x, p) in obj.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *x -= &f * p;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn single_equality() {
        let mut sys = LinearSystem::nonnegative(1);
        sys.add_int(&[1], Relation::Eq, 1);
        assert_eq!(exact_lp_feasible(&sys), Feasibility::Feasible(vec![q(1)]));
    }

    #[test]
    fn symmetric_split() {
        let mut sys = LinearSystem::nonnegative(2);
        sys.add_int(&[1, 1], Relation::Eq, 1);
        sys.add_int(&[1, -1], Relation::Eq, 0);
        let half = Q::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(exact_lp_feasible(&sys), Feasibility::Feasible(vec![half.clone(), half]));
    }

    #[test]
    fn contradictory_bounds() {
        let mut sys = LinearSystem::free(1);
        sys.add_int(&[1], Relation::Ge, 1);
        sys.add_int(&[1], Relation::Le, 0);
        match exact_lp_feasible(&sys) {
            Feasibility::Infeasible(cert) => assert!(cert.verify(&sys)),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn free_variables_may_go_negative() {
        let mut sys = LinearSystem::free(2);
        sys.add_int(&[1, 1], Relation::Eq, -3);
        sys.add_int(&[1, 0], Relation::Ge, 2);
        let x = exact_lp_feasible(&sys);
        assert!(sys.is_satisfied_by(x.point().unwrap()));
    }

    #[test]
    fn empty_system_is_feasible() {
        let sys = LinearSystem::nonnegative(3);
        assert!(exact_lp_feasible(&sys).point().is_some());
    }

    fn small_system() -> impl Strategy<Value = LinearSystem> {
        (1usize..4, 1usize..5).prop_flat_map(|(n, m)| {
            (
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec((proptest::collection::vec(-3i64..=3, n), 0u8..3, -4i64..=4), m),
            )
                .prop_map(move |(nonneg, rows)| {
                    let mut sys = LinearSystem::free(n);
                    sys.nonneg = nonneg;
                    for (coeffs, rel, rhs) in rows {
                        let rel = [Relation::Le, Relation::Eq, Relation::Ge][rel as usize];
                        sys.add_int(&coeffs, rel, rhs);
                    }
                    sys
                })
        })
    }

    proptest! {
        #[test]
        fn verdicts_carry_valid_evidence(sys in small_system()) {
            match exact_lp_feasible(&sys) {
                Feasibility::Feasible(x) => prop_assert!(sys.is_satisfied_by(&x)),
                Feasibility::Infeasible(cert) => prop_assert!(cert.verify(&sys)),
            }
        }
    }
}
