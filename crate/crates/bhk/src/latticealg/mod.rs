//! Exact integer and rational linear algebra: canonical forms, saturated
//! kernels, lattice quotients and primitivity tests.

mod lattice;
mod matrix;
mod normal_form;

pub use lattice::{is_primitive, kernel_lattice, lattice_quotient, LatticeBasis};
pub use matrix::{gcd_vec, solve_rational, solve_rational_general, IntMat, QMat};
pub use normal_form::{
    hermite_normal_form, rank, smith_normal_form, smith_with_transforms, solve_integer,
};

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("vectors do not span a sublattice of the ambient lattice")]
    NotASublattice,
    #[error("quotient is infinite (ranks differ)")]
    InfiniteQuotient,
    #[error("vector does not lie in the lattice")]
    NotInLattice,
}

/// Invariant-factor description of a finite abelian group:
/// `d_1 | d_2 | ... | d_k` with every `d_i >= 2`. The trivial group is the
/// empty list, never `(1)`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct AbelianInvariants {
    factors: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn new(factors: Vec<BigInt>) -> Self {
        let factors: Vec<BigInt> = factors.into_iter().filter(|f| *f > BigInt::one()).collect();
        for w in factors.windows(2) {
            assert!(
                (&w[1] % &w[0]) == BigInt::from(0),
                "invariant factors must form a divisibility chain"
            );
        }
        AbelianInvariants { factors }
    }

    pub fn trivial() -> Self {
        AbelianInvariants { factors: vec![] }
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Group order: the product of the invariant factors.
    pub fn order(&self) -> BigInt {
        self.factors.iter().product()
    }
}

impl std::fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}
