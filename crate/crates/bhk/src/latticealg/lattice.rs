//! Canonical lattice bases, saturated kernels, quotients, primitivity.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::{gcd_vec, solve_rational_general, IntMat, QMat};
use super::normal_form::{hermite_normal_form, smith_normal_form, smith_with_transforms};
use super::{AbelianInvariants, LatticeError};

/// A sublattice of `Z^ambient_rank` given by a full-column-rank basis matrix
/// whose columns are the basis vectors, stored in column-style HNF so that
/// equal lattices have identical representations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticeBasis {
    ambient_rank: usize,
    /// ambient_rank x rank, columns are basis vectors, column-HNF canonical.
    mat: IntMat,
}

impl LatticeBasis {
    /// Canonicalizes an arbitrary generating set (given as columns).
    /// Linearly dependent or zero generators are allowed and get dropped.
    pub fn from_generators(ambient_rank: usize, generators: &IntMat) -> Self {
        assert_eq!(generators.rows(), ambient_rank);
        // Column-style HNF = transpose of the row-style HNF of the transpose.
        let (h, _) = hermite_normal_form(&generators.transpose());
        let nonzero: Vec<Vec<BigInt>> = (0..h.rows())
            .map(|r| h.row(r))
            .filter(|row| row.iter().any(|x| !x.is_zero()))
            .collect();
        LatticeBasis {
            ambient_rank,
            mat: IntMat::from_rows(&nonzero).transpose(),
        }
    }

    pub fn empty(ambient_rank: usize) -> Self {
        LatticeBasis {
            ambient_rank,
            mat: IntMat::zero(ambient_rank, 0),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.mat.cols()
    }

    /// Basis matrix, columns are the basis vectors.
    pub fn matrix(&self) -> &IntMat {
        &self.mat
    }

    pub fn basis_vector(&self, i: usize) -> Vec<BigInt> {
        self.mat.col(i)
    }

    pub fn basis_vectors(&self) -> Vec<Vec<BigInt>> {
        (0..self.rank()).map(|i| self.basis_vector(i)).collect()
    }

    /// Coordinates of `v` in this basis, if `v` lies in the rational span.
    pub fn rational_coordinates(&self, v: &[BigInt]) -> Option<Vec<BigRational>> {
        assert_eq!(v.len(), self.ambient_rank);
        let b: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        solve_rational_general(&self.mat.to_rational(), &b).ok().flatten()
    }

    /// Integer coordinates of `v` in this basis, if `v` is a lattice member.
    pub fn integer_coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let coords = self.rational_coordinates(v)?;
        if coords.iter().all(|x| x.is_integer()) {
            Some(coords.iter().map(|x| x.to_integer()).collect())
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.integer_coordinates(v).is_some()
    }

    /// Index `[Z^n : L]` for a full-rank lattice.
    pub fn index_in_ambient(&self) -> Result<BigInt, LatticeError> {
        if self.rank() != self.ambient_rank {
            return Err(LatticeError::InfiniteQuotient);
        }
        Ok(self.mat.det().abs())
    }
}

/// Saturated integer kernel `{v in Z^cols : m v = 0}` with canonical basis.
pub fn kernel_lattice(m: &QMat) -> LatticeBasis {
    let mi = m.row_cleared();
    let (_, d, v) = smith_with_transforms(&mi);
    let n = d.rows().min(d.cols());
    let rank = (0..n).filter(|&i| !d.at(i, i).is_zero()).count();
    let cols: Vec<Vec<BigInt>> = (rank..mi.cols()).map(|c| v.col(c)).collect();
    if cols.is_empty() {
        return LatticeBasis::empty(m.cols());
    }
    let gen = IntMat::from_rows(&cols).transpose();
    LatticeBasis::from_generators(m.cols(), &gen)
}

/// Invariant factors of `ambient / sub`.
pub fn lattice_quotient(
    ambient: &LatticeBasis,
    sub: &LatticeBasis,
) -> Result<AbelianInvariants, LatticeError> {
    assert_eq!(ambient.ambient_rank(), sub.ambient_rank());
    let mut coeff_cols: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..sub.rank() {
        let v = sub.basis_vector(i);
        let coords = ambient
            .integer_coordinates(&v)
            .ok_or(LatticeError::NotASublattice)?;
        coeff_cols.push(coords);
    }
    if ambient.rank() != sub.rank() {
        return Err(LatticeError::InfiniteQuotient);
    }
    let coeff = IntMat::from_rows(&coeff_cols).transpose();
    let (_, inv) = smith_normal_form(&coeff);
    Ok(inv)
}

/// True iff `v` is not a proper multiple of another lattice vector, i.e. the
/// gcd of its coordinates in the basis of `l` is 1.
pub fn is_primitive(v: &[BigInt], l: &LatticeBasis) -> Result<bool, LatticeError> {
    let coords = l
        .integer_coordinates(v)
        .ok_or(LatticeError::NotInLattice)?;
    Ok(gcd_vec(&coords) == BigInt::one())
}
