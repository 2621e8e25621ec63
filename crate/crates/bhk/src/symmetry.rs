//! Finite diagonal symmetry groups of invertible polynomials.
//!
//! A diagonal symmetry is recorded by its phase vector: the element acting as
//! `X_i -> exp(2 pi i phi_i) X_i` is stored as the rational vector
//! `(phi_0, ..., phi_n)` with each entry reduced into `[0, 1)`. All group
//! arithmetic is done through the membership lattice
//! `L = { s in Z^{n+1} : s . phi in Z for every generator phi }`,
//! never by enumerating elements (enumeration exists only as a capped oracle).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

use crate::latticealg::{
    kernel_lattice, smith_with_transforms, AbelianInvariants, IntMat, LatticeBasis, QMat,
};
use crate::poly::{is_calabi_yau, weight_system, ExponentMatrix, PolyError, WeightSystem};

/// Default cap for the brute-force element enumeration oracle.
pub const ENUMERATION_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("generator is not a symmetry of the ambient group")]
    NotInAmbient,
    #[error("element is not a member of the group")]
    ElementNotInGroup,
    #[error("group order {0} exceeds the enumeration cap")]
    OrderCapExceeded(BigInt),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Rational phases mod 1, canonical representatives in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PhaseVector {
    phases: Vec<BigRational>,
}

impl PhaseVector {
    pub fn new(phases: Vec<BigRational>) -> Self {
        PhaseVector {
            phases: phases.into_iter().map(reduce_mod_1).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        PhaseVector {
            phases: vec![BigRational::zero(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.phases.iter().all(|p| p.is_zero())
    }

    pub fn phases(&self) -> &[BigRational] {
        &self.phases
    }

    pub fn add(&self, other: &PhaseVector) -> PhaseVector {
        assert_eq!(self.len(), other.len());
        PhaseVector::new(
            self.phases
                .iter()
                .zip(&other.phases)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn scale(&self, k: &BigInt) -> PhaseVector {
        let k = BigRational::from_integer(k.clone());
        PhaseVector::new(self.phases.iter().map(|p| p * &k).collect())
    }

    /// Sum of the phases; integral iff the element lies in SL.
    pub fn phase_sum(&self) -> BigRational {
        self.phases.iter().sum()
    }

    /// Order of the element in the diagonal torus.
    pub fn order(&self) -> BigInt {
        self.phases
            .iter()
            .fold(BigInt::one(), |acc, p| num_integer::lcm(acc, p.denom().clone()))
    }

    /// `s . phi` is integral for every lattice vector `s` iff the element
    /// belongs to the group with membership lattice containing `s`.
    fn pairs_integrally(&self, s: &[BigInt]) -> bool {
        let dot: BigRational = self
            .phases
            .iter()
            .zip(s)
            .map(|(p, si)| p * BigRational::from_integer(si.clone()))
            .sum();
        dot.is_integer()
    }
}

fn reduce_mod_1(x: BigRational) -> BigRational {
    let f = x.floor();
    x - f
}

impl std::fmt::Display for PhaseVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.phases.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Finite subgroup of the diagonal torus with cached order, invariant
/// factors, and membership lattice.
#[derive(Clone, Debug)]
pub struct DiagonalGroup {
    num_vars: usize,
    generators: Vec<PhaseVector>,
    membership: LatticeBasis,
    order: BigInt,
    invariants: AbelianInvariants,
}

impl PartialEq for DiagonalGroup {
    /// Group equality is membership-lattice equality, not generator-list
    /// equality: the lattice representation is canonical.
    fn eq(&self, other: &Self) -> bool {
        self.membership == other.membership
    }
}
impl Eq for DiagonalGroup {}

impl DiagonalGroup {
    pub fn from_generators(num_vars: usize, generators: Vec<PhaseVector>) -> Self {
        for g in &generators {
            assert_eq!(g.len(), num_vars, "generator arity mismatch");
        }
        let membership = membership_lattice(num_vars, &generators);
        let order = membership
            .index_in_ambient()
            .expect("membership lattice is full rank");
        let (_, d, _) = smith_with_transforms(membership.matrix());
        let factors: Vec<BigInt> = (0..num_vars).map(|i| d.at(i, i).clone()).collect();
        let invariants = AbelianInvariants::new(factors);
        // Consistency: the index of the membership lattice and the structure
        // of the generated group must report the same order.
        let (inv2, _) = quotient_structure(num_vars, &generators, &[]);
        assert_eq!(invariants, inv2, "group structure mismatch between routes");
        assert_eq!(order, invariants.order().max(BigInt::one()));
        DiagonalGroup {
            num_vars,
            generators,
            membership,
            order,
            invariants,
        }
    }

    pub fn trivial(num_vars: usize) -> Self {
        Self::from_generators(num_vars, vec![])
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn generators(&self) -> &[PhaseVector] {
        &self.generators
    }

    pub fn membership_lattice(&self) -> &LatticeBasis {
        &self.membership
    }

    pub fn order(&self) -> &BigInt {
        &self.order
    }

    pub fn invariants(&self) -> &AbelianInvariants {
        &self.invariants
    }

    pub fn contains(&self, p: &PhaseVector) -> bool {
        assert_eq!(p.len(), self.num_vars);
        (0..self.membership.rank())
            .all(|i| p.pairs_integrally(&self.membership.basis_vector(i)))
    }

    pub fn is_subgroup_of(&self, other: &DiagonalGroup) -> bool {
        // G1 <= G2 iff L(G2) <= L(G1).
        (0..other.membership.rank())
            .all(|i| self.membership.contains(&other.membership.basis_vector(i)))
    }

    /// Brute-force element enumeration; oracle use only.
    pub fn enumerate_elements(&self, cap: usize) -> Result<Vec<PhaseVector>, SymError> {
        if self.order > BigInt::from(cap) {
            return Err(SymError::OrderCapExceeded(self.order.clone()));
        }
        let mut seen: BTreeSet<PhaseVector> = BTreeSet::new();
        seen.insert(PhaseVector::zero(self.num_vars));
        let mut frontier: Vec<PhaseVector> = seen.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            for g in &self.generators {
                let y = x.add(g);
                if seen.insert(y.clone()) {
                    if seen.len() > cap {
                        return Err(SymError::OrderCapExceeded(self.order.clone()));
                    }
                    frontier.push(y);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }
}

/// `{ s in Z^{n+1} : s . phi in Z for all generators }`, always full rank.
fn membership_lattice(num_vars: usize, generators: &[PhaseVector]) -> LatticeBasis {
    let k = generators.len();
    if k == 0 {
        return LatticeBasis::from_generators(num_vars, &IntMat::identity(num_vars));
    }
    // Kernel of [P | -I_k] over the integers, projected to the s-block:
    // s . g_i = t_i with t integral.
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(k);
    for (i, g) in generators.iter().enumerate() {
        let mut row: Vec<BigRational> = g.phases().to_vec();
        row.extend((0..k).map(|j| {
            if j == i {
                -BigRational::one()
            } else {
                BigRational::zero()
            }
        }));
        rows.push(row);
    }
    let kernel = kernel_lattice(&QMat::from_rows(&rows));
    let projected: Vec<Vec<BigInt>> = kernel
        .basis_vectors()
        .into_iter()
        .map(|v| v[..num_vars].to_vec())
        .collect();
    let gen = IntMat::from_rows(&projected).transpose();
    LatticeBasis::from_generators(num_vars, &gen)
}

/// Structure of the finite group `<gens> / (Z^{n+1} + <extras>)` in
/// `(Q/Z)^{n+1}`: invariant factors plus one generator per factor, aligned so
/// the i-th generator has order `d_i` in the quotient.
pub(crate) fn quotient_structure(
    num_vars: usize,
    gens: &[PhaseVector],
    extras: &[PhaseVector],
) -> (AbelianInvariants, Vec<PhaseVector>) {
    let k = gens.len();
    if k == 0 {
        return (AbelianInvariants::trivial(), vec![]);
    }
    // Relation lattice K = { a in Z^k : sum a_i g_i in Z^{n+1} + <extras> },
    // computed as the projection of an integer kernel.
    let e = extras.len();
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(num_vars);
    for coord in 0..num_vars {
        let mut row: Vec<BigRational> = Vec::with_capacity(k + e + num_vars);
        for g in gens {
            row.push(g.phases()[coord].clone());
        }
        for x in extras {
            row.push(-x.phases()[coord].clone());
        }
        for j in 0..num_vars {
            row.push(if j == coord {
                -BigRational::one()
            } else {
                BigRational::zero()
            });
        }
        rows.push(row);
    }
    let kernel = kernel_lattice(&QMat::from_rows(&rows));
    let projected: Vec<Vec<BigInt>> = kernel
        .basis_vectors()
        .into_iter()
        .map(|v| v[..k].to_vec())
        .collect();
    let relations = LatticeBasis::from_generators(k, &IntMat::from_rows(&projected).transpose());
    assert_eq!(relations.rank(), k, "phase generators have finite order");
    let (u, d, _) = smith_with_transforms(relations.matrix());
    let u_inv = u.int_inverse().expect("u is unimodular");
    let mut factors = Vec::new();
    let mut aligned = Vec::new();
    for i in 0..k {
        let di = d.at(i, i).clone();
        if di > BigInt::one() {
            let coeffs = u_inv.col(i);
            let mut p = PhaseVector::zero(num_vars);
            for (j, g) in gens.iter().enumerate() {
                p = p.add(&g.scale(&coeffs[j]));
            }
            factors.push(di);
            aligned.push(p);
        }
    }
    (AbelianInvariants::new(factors), aligned)
}

/// `Aut(W) = <rho_0, ..., rho_n>` where the generators are the columns of
/// `E^{-1}` reduced mod 1; the order is `|det E|`.
pub fn aut_group(e: &ExponentMatrix) -> DiagonalGroup {
    let inv = e
        .matrix()
        .to_rational()
        .inverse()
        .expect("exponent matrix is nonsingular by construction");
    let n = e.size();
    let gens: Vec<PhaseVector> = (0..n)
        .map(|j| PhaseVector::new((0..n).map(|i| inv.at(i, j).clone()).collect()))
        .collect();
    let g = DiagonalGroup::from_generators(n, gens);
    debug_assert_eq!(*g.order(), e.det().abs());
    g
}

/// The exponential element `j_W` with phases `c_i / d`.
pub fn exponential_element(w: &WeightSystem) -> PhaseVector {
    PhaseVector::new(
        w.weights()
            .iter()
            .map(|c| BigRational::new(c.clone(), w.degree().clone()))
            .collect(),
    )
}

/// Subgroup generated by `gens` inside `ambient`.
pub fn subgroup(
    gens: Vec<PhaseVector>,
    ambient: &DiagonalGroup,
) -> Result<DiagonalGroup, SymError> {
    for g in &gens {
        if !ambient.contains(g) {
            return Err(SymError::NotInAmbient);
        }
    }
    Ok(DiagonalGroup::from_generators(ambient.num_vars(), gens))
}

/// True iff every generator (hence every element) has integral phase sum.
pub fn is_special_linear(g: &DiagonalGroup) -> bool {
    g.generators().iter().all(|p| p.phase_sum().is_integer())
}

/// Outcome of the CY-type test with per-clause diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyTypeCheck {
    pub calabi_yau: bool,
    pub contains_j: bool,
    pub special_linear: bool,
}

impl CyTypeCheck {
    pub fn holds(&self) -> bool {
        self.calabi_yau && self.contains_j && self.special_linear
    }

    pub fn diagnostic(&self) -> Option<String> {
        let mut failed = Vec::new();
        if !self.calabi_yau {
            failed.push("Calabi-Yau condition fails (sum of weights != degree)");
        }
        if !self.contains_j {
            failed.push("group does not contain the exponential element j_W");
        }
        if !self.special_linear {
            failed.push("group is not contained in SL (non-integral phase sum)");
        }
        if failed.is_empty() {
            None
        } else {
            Some(failed.join("; "))
        }
    }
}

/// CY-type: CY condition, `j_W in G`, and `G <= SL`.
pub fn is_cy_type(e: &ExponentMatrix, g: &DiagonalGroup) -> Result<CyTypeCheck, SymError> {
    let w = weight_system(e)?;
    let j = exponential_element(&w);
    Ok(CyTypeCheck {
        calabi_yau: is_calabi_yau(&w),
        contains_j: g.contains(&j),
        special_linear: is_special_linear(g),
    })
}

/// Dual group `G^T`: for each basis vector `s` of the membership lattice of
/// `G`, the element `s . E^{-1}` mod 1 is a symmetry of `W^T`; together they
/// generate `G^T`.
pub fn dual_group(e: &ExponentMatrix, g: &DiagonalGroup) -> DiagonalGroup {
    let n = e.size();
    assert_eq!(g.num_vars(), n);
    let inv = e
        .matrix()
        .to_rational()
        .inverse()
        .expect("exponent matrix is nonsingular by construction");
    let mut gens = Vec::new();
    for i in 0..g.membership_lattice().rank() {
        let s = g.membership_lattice().basis_vector(i);
        let phases: Vec<BigRational> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|r| BigRational::from_integer(s[r].clone()) * inv.at(r, j))
                    .sum()
            })
            .collect();
        gens.push(PhaseVector::new(phases));
    }
    DiagonalGroup::from_generators(n, gens)
}

/// The group cut out by a full-rank membership lattice: generated by the rows
/// of the inverse of the basis matrix, reduced mod 1.
pub fn group_from_membership(l: &LatticeBasis) -> DiagonalGroup {
    let n = l.ambient_rank();
    assert_eq!(l.rank(), n, "membership lattice must be full rank");
    let inv = l
        .matrix()
        .to_rational()
        .inverse()
        .expect("full-rank lattice basis");
    let gens: Vec<PhaseVector> = (0..n)
        .map(|i| PhaseVector::new(inv.row(i)))
        .collect();
    DiagonalGroup::from_generators(n, gens)
}

/// `G` intersected with SL: adds the all-ones vector to the membership
/// lattice.
pub fn sl_intersection(g: &DiagonalGroup) -> DiagonalGroup {
    let n = g.num_vars();
    let mut cols: Vec<Vec<BigInt>> = g.membership_lattice().basis_vectors();
    cols.push(vec![BigInt::one(); n]);
    let l = LatticeBasis::from_generators(n, &IntMat::from_rows(&cols).transpose());
    group_from_membership(&l)
}

/// Quotient `G / <j>`: invariant factors plus generating coset
/// representatives aligned with them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientGroup {
    pub invariants: AbelianInvariants,
    pub generators: Vec<PhaseVector>,
}

impl QuotientGroup {
    /// One representative per coset, in deterministic mixed-radix order.
    /// Guarded by the enumeration cap.
    pub fn coset_representatives(&self, cap: usize) -> Result<Vec<PhaseVector>, SymError> {
        let order = self.invariants.order().max(BigInt::one());
        if order > BigInt::from(cap) {
            return Err(SymError::OrderCapExceeded(order));
        }
        let n = self
            .generators
            .first()
            .map(|g| g.len())
            .unwrap_or(0);
        let mut reps = vec![PhaseVector::zero(n)];
        for (g, d) in self.generators.iter().zip(self.invariants.factors()) {
            let mut next = Vec::new();
            let mut power = PhaseVector::zero(n);
            let mut i = BigInt::zero();
            while &i < d {
                for r in &reps {
                    next.push(r.add(&power));
                }
                power = power.add(g);
                i += 1;
            }
            reps = next;
        }
        Ok(reps)
    }
}

pub fn quotient_by_j(g: &DiagonalGroup, j: &PhaseVector) -> Result<QuotientGroup, SymError> {
    if !g.contains(j) {
        return Err(SymError::ElementNotInGroup);
    }
    let (invariants, generators) =
        quotient_structure(g.num_vars(), g.generators(), &[j.clone()]);
    Ok(QuotientGroup {
        invariants,
        generators,
    })
}

/// Parses the CLI group syntax: semicolon-separated generators, each a
/// comma-separated list of rationals; the keyword `j` expands to the
/// exponential element.
pub fn parse_group_spec(
    spec: &str,
    w: &WeightSystem,
    ambient: &DiagonalGroup,
) -> Result<DiagonalGroup, String> {
    let mut gens = Vec::new();
    for part in spec.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        if part == "j" {
            gens.push(exponential_element(w));
            continue;
        }
        let phases: Result<Vec<BigRational>, _> = part
            .split(',')
            .map(|t| t.trim().parse::<BigRational>())
            .collect();
        let phases = phases.map_err(|e| format!("bad generator {part:?}: {e}"))?;
        if phases.len() != w.num_vars() {
            return Err(format!(
                "generator {part:?} has {} entries, expected {}",
                phases.len(),
                w.num_vars()
            ));
        }
        gens.push(PhaseVector::new(phases));
    }
    subgroup(gens, ambient).map_err(|e| e.to_string())
}
