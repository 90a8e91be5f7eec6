//! Exact rational linear algebra: reduced row echelon form, kernels, and the
//! extreme rays of `{y ≥ 0 : D y = 0}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// In-place reduced row echelon form over the rationals, restricted to the
/// columns in `cols`. Returns the pivot columns in order.
pub fn rref_on(mat: &mut [Vec<Q>], cols: &[usize]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for &c in cols {
        if row == mat.len() {
            break;
        }
        let Some(p) = (row..mat.len()).find(|&r| !mat[r][c].is_zero()) else {
            continue;
        };
        mat.swap(row, p);
        let inv = mat[row][c].recip();
        for x in mat[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..mat.len() {
            if r != row && !mat[r][c].is_zero() {
                let factor = mat[r][c].clone();
                let (pivot_row, other) = if r < row {
                    let (a, b) = mat.split_at_mut(row);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = mat.split_at_mut(r);
                    (&a[row], &mut b[0])
                };
                for (x, p) in other.iter_mut().zip(pivot_row.iter()) {
                    if !p.is_zero() {
                        *x -= &factor * p;
                    }
                }
            }
        }
        pivots.push(c);
        row += 1;
    }
    pivots
}

/// Basis of `{y : rows · y = 0, y_j = 0 for j ∉ support}`, each vector
/// scaled to a primitive integer vector.
pub fn kernel_on(rows: &[Vec<i64>], ncols: usize, support: &[usize]) -> Vec<Vec<BigInt>> {
    let mut mat: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| (0..ncols).map(|j| q(r.get(j).copied().unwrap_or(0))).collect())
        .collect();
    let pivots = rref_on(&mut mat, support);
    let free: Vec<usize> = support.iter().copied().filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -mat[i][f].clone();
            }
            primitive(&v)
        })
        .collect()
}

pub fn kernel_basis(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<BigInt>> {
    let all: Vec<usize> = (0..ncols).collect();
    kernel_on(rows, ncols, &all)
}

/// Scales a rational vector to the primitive integer vector on the same ray.
pub fn primitive(v: &[Q]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Q::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn to_i64_vec(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.to_i64()).collect()
}

pub fn dot(y: &[i64], u: &[u32]) -> i128 {
    y.iter().zip(u).map(|(&a, &b)| a as i128 * b as i128).sum()
}

/// Extreme rays of the cone `{y ≥ 0 : rows · y = 0}` over `ncols`
/// coordinates, as primitive integer vectors.
///
/// The extreme rays are the nonnegative elementary vectors of the kernel:
/// a support `S` carries one exactly when the kernel restricted to `S` is
/// one-dimensional and spanned by a vector positive on all of `S`. Supports
/// are enumerated by increasing size and supersets of found supports skipped.
/// Returns `None` above `max_cols` coordinates.
pub fn extreme_rays(rows: &[Vec<i64>], ncols: usize, max_cols: usize) -> Option<Vec<Vec<i64>>> {
    if ncols > max_cols || ncols >= 64 {
        return None;
    }
    let mut masks: Vec<u64> = (1..(1u64 << ncols)).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let mut found_supports: Vec<u64> = Vec::new();
    let mut rays = Vec::new();
    for m in masks {
        if found_supports.iter().any(|&f| f & !m == 0) {
            continue;
        }
        let support: Vec<usize> = (0..ncols).filter(|&j| m >> j & 1 == 1).collect();
        let kernel = kernel_on(rows, ncols, &support);
        if kernel.len() != 1 {
            continue;
        }
        let v = &kernel[0];
        let all_pos = support.iter().all(|&j| v[j].is_positive());
        let all_neg = support.iter().all(|&j| v[j].is_negative());
        if !(all_pos || all_neg) {
            continue;
        }
        let v: Vec<BigInt> = if all_neg {
            v.iter().map(|x| -x).collect()
        } else {
            v.clone()
        };
        let v = to_i64_vec(&v)?;
        found_supports.push(m);
        rays.push(v);
    }
    Some(rays)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_of_parity_relations() {
        let rows = vec![vec![1, 0, -1, 0], vec![0, 1, 0, -1]];
        let k = kernel_basis(&rows, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            for r in &rows {
                let s: BigInt = r.iter().zip(v).map(|(a, b)| BigInt::from(*a) * b).sum();
                assert!(s.is_zero());
            }
        }
        let rays = extreme_rays(&rows, 4, 16).unwrap();
        assert_eq!(rays.len(), 2);
        assert!(rays.contains(&vec![1, 0, 1, 0]));
        assert!(rays.contains(&vec![0, 1, 0, 1]));
    }

    #[test]
    fn kernel_of_collapse_relations() {
        let k = kernel_basis(&[vec![0, -1]], 2);
        assert_eq!(k, vec![bi(&[1, 0])]);
        assert_eq!(kernel_basis(&[], 3).len(), 3);
    }

    #[test]
    fn rays_skip_signed_circuits() {
        // y0 = y1 + y2: rays (1,1,0) and (1,0,1)
        let rays = extreme_rays(&[vec![1, -1, -1]], 3, 16).unwrap();
        assert_eq!(rays.len(), 2);
        assert!(rays.contains(&vec![1, 1, 0]));
        assert!(rays.contains(&vec![1, 0, 1]));
        // y0 + y1 = 0 has no nonzero nonnegative solution in those coordinates
        let rays = extreme_rays(&[vec![1, 1, 0]], 3, 16).unwrap();
        assert_eq!(rays, vec![vec![0, 0, 1]]);
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![
            Q::new(BigInt::from(1), BigInt::from(2)),
            Q::new(BigInt::from(-3), BigInt::from(4)),
        ];
        assert_eq!(primitive(&v), bi(&[2, -3]));
    }
}
