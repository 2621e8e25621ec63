//! Hermite and Smith normal forms over the integers.
//!
//! Conventions are fixed once so that every lattice-valued result in the crate
//! is canonical: row-style HNF with positive pivots and entries above each
//! pivot reduced into `[0, pivot)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMat;
use super::AbelianInvariants;

/// Row-style Hermite normal form. Returns `(h, u)` with `u` unimodular and
/// `u * m = h`.
pub fn hermite_normal_form(m: &IntMat) -> (IntMat, IntMat) {
    let mut h = m.clone();
    let mut u = IntMat::identity(m.rows());
    let (rows, cols) = (h.rows(), h.cols());
    let mut prow = 0;
    for col in 0..cols {
        if prow == rows {
            break;
        }
        // Gcd elimination below the pivot.
        loop {
            let mut best: Option<usize> = None;
            for r in prow..rows {
                if !h.at(r, col).is_zero() {
                    match best {
                        None => best = Some(r),
                        Some(b) => {
                            if h.at(r, col).abs() < h.at(b, col).abs() {
                                best = Some(r);
                            }
                        }
                    }
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(prow, b);
            u.swap_rows(prow, b);
            let piv = h.at(prow, col).clone();
            let mut any_below = false;
            for r in prow + 1..rows {
                if h.at(r, col).is_zero() {
                    continue;
                }
                let q = -h.at(r, col).div_floor(&piv);
                h.add_row_multiple(r, prow, &q);
                u.add_row_multiple(r, prow, &q);
                if !h.at(r, col).is_zero() {
                    any_below = true;
                }
            }
            if !any_below {
                break;
            }
        }
        if h.at(prow, col).is_zero() {
            continue;
        }
        if h.at(prow, col).is_negative() {
            h.negate_row(prow);
            u.negate_row(prow);
        }
        let piv = h.at(prow, col).clone();
        for r in 0..prow {
            let q = -h.at(r, col).div_floor(&piv);
            if !q.is_zero() {
                h.add_row_multiple(r, prow, &q);
                u.add_row_multiple(r, prow, &q);
            }
        }
        prow += 1;
    }
    (h, u)
}

/// Smith normal form with transforms: returns `(u, d, v)` such that
/// `u * m * v = d`, `u` and `v` unimodular, `d` diagonal with
/// `d_1 | d_2 | ...` and nonnegative diagonal entries.
pub fn smith_with_transforms(m: &IntMat) -> (IntMat, IntMat, IntMat) {
    let mut d = m.clone();
    let mut u = IntMat::identity(m.rows());
    let mut v = IntMat::identity(m.cols());
    let (rows, cols) = (d.rows(), d.cols());
    let n = rows.min(cols);

    let mut t = 0;
    while t < n {
        // Move an entry of minimal nonzero magnitude to (t, t).
        let mut best: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                if !d.at(r, c).is_zero() {
                    match best {
                        None => best = Some((r, c)),
                        Some((br, bc)) => {
                            if d.at(r, c).abs() < d.at(br, bc).abs() {
                                best = Some((r, c));
                            }
                        }
                    }
                }
            }
        }
        let Some((br, bc)) = best else { break };
        d.swap_rows(t, br);
        u.swap_rows(t, br);
        d.swap_cols(t, bc);
        v.swap_cols(t, bc);

        // Clear row and column t; restart if a remainder shrinks the pivot.
        let mut dirty = true;
        while dirty {
            dirty = false;
            for r in t + 1..rows {
                if d.at(r, t).is_zero() {
                    continue;
                }
                let q = -(d.at(r, t) / d.at(t, t));
                d.add_row_multiple(r, t, &q);
                u.add_row_multiple(r, t, &q);
                if !d.at(r, t).is_zero() {
                    d.swap_rows(t, r);
                    u.swap_rows(t, r);
                    dirty = true;
                }
            }
            for c in t + 1..cols {
                if d.at(t, c).is_zero() {
                    continue;
                }
                let q = -(d.at(t, c) / d.at(t, t));
                d.add_col_multiple(c, t, &q);
                v.add_col_multiple(c, t, &q);
                if !d.at(t, c).is_zero() {
                    d.swap_cols(t, c);
                    v.swap_cols(t, c);
                    dirty = true;
                }
            }
        }

        // Enforce divisibility: pivot must divide every remaining entry.
        let piv = d.at(t, t).clone();
        let mut offending: Option<usize> = None;
        'scan: for r in t + 1..rows {
            for c in t + 1..cols {
                if !(d.at(r, c) % &piv).is_zero() {
                    offending = Some(r);
                    break 'scan;
                }
            }
        }
        if let Some(r) = offending {
            d.add_row_multiple(t, r, &BigInt::one());
            u.add_row_multiple(t, r, &BigInt::one());
            continue; // redo step t with the enlarged row
        }
        if d.at(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    (u, d, v)
}

/// Smith normal form plus the invariant-factor summary of the cokernel.
/// Invariants are the diagonal entries > 1.
pub fn smith_normal_form(m: &IntMat) -> (IntMat, AbelianInvariants) {
    let (_, d, _) = smith_with_transforms(m);
    let n = d.rows().min(d.cols());
    let factors: Vec<BigInt> = (0..n)
        .map(|i| d.at(i, i).clone())
        .filter(|x| *x > BigInt::one())
        .collect();
    (d, AbelianInvariants::new(factors))
}

/// Rank of an integer matrix (over Q).
pub fn rank(m: &IntMat) -> usize {
    let (h, _) = hermite_normal_form(m);
    (0..h.rows())
        .filter(|&r| (0..h.cols()).any(|c| !h.at(r, c).is_zero()))
        .count()
}

/// Integer solutions of `a * x = b`, or `None` when no integral solution
/// exists. Free coordinates are pinned to zero (in Smith coordinates).
pub fn solve_integer(a: &IntMat, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len());
    let (u, d, v) = smith_with_transforms(a);
    let ub = u.mul_vec(b);
    let n = d.rows().min(d.cols());
    let mut z = vec![BigInt::zero(); a.cols()];
    for i in 0..a.rows() {
        let di = if i < n { d.at(i, i).clone() } else { BigInt::zero() };
        if di.is_zero() {
            if !ub[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = ub[i].div_rem(&di);
            if !r.is_zero() {
                return None;
            }
            z[i] = q;
        }
    }
    Some(v.mul_vec(&z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn inv_vec(inv: &AbelianInvariants) -> Vec<i64> {
        inv.factors().iter().map(|x| x.to_i64().unwrap()).collect()
    }

    #[test]
    fn hnf_identity() {
        let m = IntMat::identity(3);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h, IntMat::identity(3));
        assert_eq!(u, IntMat::identity(3));
    }

    #[test]
    fn hnf_reduces_above_pivot() {
        // Oracle (frozen): exhaustive search over products of unimodular row
        // operations with entries bounded by 10 gives h = [[2,1],[0,3]].
        let m = IntMat::from_i64_rows(&[vec![2, 4], vec![0, 3]]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h, IntMat::from_i64_rows(&[vec![2, 1], vec![0, 3]]));
        assert_eq!(u.mul(&m), h);
        assert_eq!(u.det().abs(), num_bigint::BigInt::from(1));
    }

    #[test]
    fn hnf_fixed_point() {
        let m = IntMat::from_i64_rows(&[vec![5, 0], vec![0, 5]]);
        let (h, _) = hermite_normal_form(&m);
        assert_eq!(h, m);
    }

    #[test]
    fn snf_diagonal_input() {
        let mut m = IntMat::zero(5, 5);
        for i in 0..5 {
            *m.at_mut(i, i) = num_bigint::BigInt::from(5);
        }
        let (_, inv) = smith_normal_form(&m);
        assert_eq!(inv_vec(&inv), vec![5, 5, 5, 5, 5]);
    }

    #[test]
    fn snf_chain_quintic() {
        // Oracle (frozen): d_k = g_k / g_{k-1} with g_k the gcd of all k x k
        // minors; for this matrix g_1 = ... = g_4 = 1, g_5 = det = 1280.
        let e = IntMat::from_i64_rows(&[
            vec![4, 1, 0, 0, 0],
            vec![0, 4, 1, 0, 0],
            vec![0, 0, 4, 1, 0],
            vec![0, 0, 0, 4, 1],
            vec![0, 0, 0, 0, 5],
        ]);
        let (_, inv) = smith_normal_form(&e);
        assert_eq!(inv_vec(&inv), vec![1280]);
    }

    #[test]
    fn snf_mixed_quintic() {
        // Same minor-gcd oracle; det = 4 * 5^4 = 2500.
        let e = IntMat::from_i64_rows(&[
            vec![4, 1, 0, 0, 0],
            vec![0, 5, 0, 0, 0],
            vec![0, 0, 5, 0, 0],
            vec![0, 0, 0, 5, 0],
            vec![0, 0, 0, 0, 5],
        ]);
        let (_, inv) = smith_normal_form(&e);
        assert_eq!(inv_vec(&inv), vec![5, 5, 5, 20]);
    }

    #[test]
    fn smith_transform_identity() {
        let m = IntMat::from_i64_rows(&[vec![6, 4, 2], vec![2, 8, 4]]);
        let (u, d, v) = smith_with_transforms(&m);
        assert_eq!(u.mul(&m).mul(&v), d);
        assert_eq!(u.det().abs(), num_bigint::BigInt::from(1));
        assert_eq!(v.det().abs(), num_bigint::BigInt::from(1));
    }

    #[test]
    fn solve_integer_basic() {
        let a = IntMat::from_i64_rows(&[vec![2, 0], vec![0, 3]]);
        let b = vec![num_bigint::BigInt::from(4), num_bigint::BigInt::from(9)];
        let x = solve_integer(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        let b = vec![num_bigint::BigInt::from(1), num_bigint::BigInt::from(1)];
        assert!(solve_integer(&a, &b).is_none());
    }
}
