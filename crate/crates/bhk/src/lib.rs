//! Exact-arithmetic toolkit for transpose mirror constructions of invertible
//! quasi-homogeneous polynomials with finite diagonal symmetry groups.
//!
//! The crate computes, entirely over arbitrary-precision rationals:
//! weight systems and atom decompositions of invertible polynomials, their
//! diagonal symmetry groups and dual groups, the toric data of the mirror
//! ambient space, and explicit birational atlases identifying the mirrors of
//! polynomials that share a weight system and symmetry group.

pub mod cli;
pub mod latticealg;
pub mod mirror;
pub mod poly;
pub mod symmetry;
pub mod toric;
