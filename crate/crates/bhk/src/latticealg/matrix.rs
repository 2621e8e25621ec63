//! Dense exact matrices over the integers and rationals.
//!
//! Everything downstream (weight systems, symmetry groups, fans) is built on
//! these two types. No floating point appears anywhere in the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use super::LatticeError;

/// Row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// Row-major matrix of arbitrary-precision rationals, entries in lowest terms.
#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        IntMat {
            rows: r,
            cols: c,
            data: rows.iter().flatten().cloned().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let big: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        IntMat::from_rows(&big)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> Vec<BigInt> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMat::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let add = a * other.at(k, c);
                    *out.at_mut(r, c) += add;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c) * &v[c]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn to_rational(&self) -> QMat {
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect(),
        }
    }

    /// Exact determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.at(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a.at(r, k).is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a.at(k, k) * a.at(i, j) - a.at(i, k) * a.at(k, j);
                    *a.at_mut(i, j) = num / &prev;
                }
                *a.at_mut(i, k) = BigInt::zero();
            }
            prev = a.at(k, k).clone();
        }
        sign * a.at(n - 1, n - 1).clone()
    }

    /// Inverse of a unimodular (or at least invertible-over-Z) matrix.
    pub fn int_inverse(&self) -> Result<IntMat, LatticeError> {
        let inv = self.to_rational().inverse()?;
        inv.to_integer().ok_or(LatticeError::SingularMatrix)
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row_i += q * row_j
    pub fn add_row_multiple(&mut self, i: usize, j: usize, q: &BigInt) {
        assert_ne!(i, j);
        for c in 0..self.cols {
            let add = q * self.at(j, c);
            *self.at_mut(i, c) += add;
        }
    }

    /// col_i += q * col_j
    pub fn add_col_multiple(&mut self, i: usize, j: usize, q: &BigInt) {
        assert_ne!(i, j);
        for r in 0..self.rows {
            let add = q * self.at(r, j);
            *self.at_mut(r, i) += add;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -self.at(i, c).clone();
            *self.at_mut(i, c) = v;
        }
    }

    pub fn negate_col(&mut self, i: usize) {
        for r in 0..self.rows {
            let v = -self.at(r, i).clone();
            *self.at_mut(r, i) = v;
        }
    }
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigRational::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigRational>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        QMat {
            rows: r,
            cols: c,
            data: rows.iter().flatten().cloned().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut BigRational {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> Vec<BigRational> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> QMat {
        let mut t = QMat::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c) * &v[c]).sum())
            .collect()
    }

    /// Clears denominators row by row, which preserves the kernel.
    pub fn row_cleared(&self) -> IntMat {
        let mut out = IntMat::zero(self.rows, self.cols);
        for r in 0..self.rows {
            let mut lcm = BigInt::one();
            for c in 0..self.cols {
                lcm = num_integer::lcm(lcm, self.at(r, c).denom().clone());
            }
            for c in 0..self.cols {
                let v = self.at(r, c) * BigRational::from_integer(lcm.clone());
                debug_assert!(v.is_integer());
                *out.at_mut(r, c) = v.to_integer();
            }
        }
        out
    }

    pub fn to_integer(&self) -> Option<IntMat> {
        if self.data.iter().all(|x| x.is_integer()) {
            Some(IntMat {
                rows: self.rows,
                cols: self.cols,
                data: self.data.iter().map(|x| x.to_integer()).collect(),
            })
        } else {
            None
        }
    }

    /// Gaussian elimination returning the inverse of a square matrix.
    pub fn inverse(&self) -> Result<QMat, LatticeError> {
        if self.rows != self.cols {
            return Err(LatticeError::SingularMatrix);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMat::identity(n);
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a.at(r, col).is_zero()) else {
                return Err(LatticeError::SingularMatrix);
            };
            for c in 0..n {
                let tmp = a.at(p, c).clone();
                *a.at_mut(p, c) = a.at(col, c).clone();
                *a.at_mut(col, c) = tmp;
                let tmp = inv.at(p, c).clone();
                *inv.at_mut(p, c) = inv.at(col, c).clone();
                *inv.at_mut(col, c) = tmp;
            }
            let piv = a.at(col, col).clone();
            for c in 0..n {
                let v = a.at(col, c).clone() / piv.clone();
                *a.at_mut(col, c) = v;
                let v = inv.at(col, c).clone() / piv.clone();
                *inv.at_mut(col, c) = v;
            }
            for r in 0..n {
                if r == col || a.at(r, col).is_zero() {
                    continue;
                }
                let f = a.at(r, col).clone();
                for c in 0..n {
                    let v = a.at(r, c).clone() - f.clone() * a.at(col, c);
                    *a.at_mut(r, c) = v;
                    let v = inv.at(r, c).clone() - f.clone() * inv.at(col, c);
                    *inv.at_mut(r, c) = v;
                }
            }
        }
        Ok(inv)
    }
}

/// Exact solution of a square nonsingular system `m * x = b`.
pub fn solve_rational(m: &QMat, b: &[BigRational]) -> Result<Vec<BigRational>, LatticeError> {
    if m.rows() != m.cols() || m.rows() != b.len() {
        return Err(LatticeError::SingularMatrix);
    }
    solve_rational_general(m, b)?.ok_or(LatticeError::SingularMatrix)
}

/// Particular solution of a general (possibly non-square) system, or `None`
/// when inconsistent. Free variables are pinned to zero.
pub fn solve_rational_general(
    m: &QMat,
    b: &[BigRational],
) -> Result<Option<Vec<BigRational>>, LatticeError> {
    assert_eq!(m.rows(), b.len());
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut rhs = b.to_vec();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut prow = 0;
    for col in 0..cols {
        let Some(p) = (prow..rows).find(|&r| !a.at(r, col).is_zero()) else {
            continue;
        };
        for c in 0..cols {
            let tmp = a.at(p, c).clone();
            *a.at_mut(p, c) = a.at(prow, c).clone();
            *a.at_mut(prow, c) = tmp;
        }
        rhs.swap(p, prow);
        let piv = a.at(prow, col).clone();
        for c in 0..cols {
            let v = a.at(prow, c).clone() / piv.clone();
            *a.at_mut(prow, c) = v;
        }
        rhs[prow] = rhs[prow].clone() / piv;
        for r in 0..rows {
            if r == prow || a.at(r, col).is_zero() {
                continue;
            }
            let f = a.at(r, col).clone();
            for c in 0..cols {
                let v = a.at(r, c).clone() - f.clone() * a.at(prow, c);
                *a.at_mut(r, c) = v;
            }
            rhs[r] = rhs[r].clone() - f * rhs[prow].clone();
        }
        pivots.push((prow, col));
        prow += 1;
        if prow == rows {
            break;
        }
    }
    // Inconsistent iff a zero row has nonzero rhs.
    for r in prow..rows {
        if !rhs[r].is_zero() {
            return Ok(None);
        }
    }
    let mut x = vec![BigRational::zero(); cols];
    for &(r, c) in &pivots {
        x[c] = rhs[r].clone();
    }
    Ok(Some(x))
}

pub fn gcd_vec(v: &[BigInt]) -> BigInt {
    v.iter()
        .fold(BigInt::zero(), |acc, x| num_integer::gcd(acc, x.abs()))
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.at(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.at(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn det_small() {
        let m = IntMat::from_i64_rows(&[vec![2, 4], vec![0, 3]]);
        assert_eq!(m.det(), BigInt::from(6));
        let m = IntMat::from_i64_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.det(), BigInt::from(0));
    }

    #[test]
    fn det_chain_quintic() {
        let e = IntMat::from_i64_rows(&[
            vec![4, 1, 0, 0, 0],
            vec![0, 4, 1, 0, 0],
            vec![0, 0, 4, 1, 0],
            vec![0, 0, 0, 4, 1],
            vec![0, 0, 0, 0, 5],
        ]);
        assert_eq!(e.det(), BigInt::from(1280));
    }

    #[test]
    fn solve_fermat_weights() {
        // (5 I) x = 1 -> x = (1/5, ..., 1/5)
        let m = IntMat::from_i64_rows(&[
            vec![5, 0, 0, 0, 0],
            vec![0, 5, 0, 0, 0],
            vec![0, 0, 5, 0, 0],
            vec![0, 0, 0, 5, 0],
            vec![0, 0, 0, 0, 5],
        ])
        .to_rational();
        let b = vec![BigRational::one(); 5];
        let x = solve_rational(&m, &b).unwrap();
        assert!(x.iter().all(|v| *v == q(1, 5)));
    }

    #[test]
    fn solve_singular_rejected() {
        let m = IntMat::from_i64_rows(&[vec![1, 2], vec![2, 4]]).to_rational();
        let b = vec![BigRational::one(), BigRational::one()];
        assert!(matches!(
            solve_rational(&m, &b),
            Err(LatticeError::SingularMatrix)
        ));
    }

    #[test]
    fn general_solve_underdetermined() {
        // x + y = 2 has a particular solution
        let m = QMat::from_rows(&[vec![q(1, 1), q(1, 1)]]);
        let x = solve_rational_general(&m, &[q(2, 1)]).unwrap().unwrap();
        assert_eq!(x[0].clone() + x[1].clone(), q(2, 1));
    }

    #[test]
    fn general_solve_inconsistent() {
        let m = QMat::from_rows(&[vec![q(1, 1), q(1, 1)], vec![q(2, 1), q(2, 1)]]);
        let r = solve_rational_general(&m, &[q(1, 1), q(3, 1)]).unwrap();
        assert!(r.is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = IntMat::from_i64_rows(&[vec![4, 1], vec![0, 5]]).to_rational();
        let inv = m.inverse().unwrap();
        let e00 = inv.at(0, 0).clone();
        assert_eq!(e00, q(1, 4));
        assert_eq!(inv.at(0, 1).clone(), q(-1, 20));
    }
}
