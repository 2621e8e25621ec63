//! Toric geometry of the mirror ambient space.
//!
//! From a weight system and a finite diagonal group `G` we build the lattice
//! `M` of degree-zero `G`-invariant Laurent exponents, the lattice points
//! `nu_j` (restrictions of the coordinate functionals) and
//! `mu_i = row_i(E) - (1,...,1)`, the complete simplex fan over the `mu_i`,
//! and the structural data of the associated ambient space: the positive
//! primitive relation among the `mu_i` and the finite quotient `M / <mu_i>`.
//! For a Calabi-Yau-type pair these reproduce the weight system of the
//! transposed polynomial and the reduced dual group.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::latticealg::{
    gcd_vec, is_primitive, kernel_lattice, smith_with_transforms, solve_rational,
    solve_rational_general, AbelianInvariants, IntMat, LatticeBasis, QMat,
};
use crate::poly::{
    is_calabi_yau, transpose, weight_system, ExponentMatrix, PolyError, Polynomial, WeightSystem,
};
use crate::symmetry::{
    dual_group, exponential_element, is_special_linear, quotient_by_j, DiagonalGroup, PhaseVector,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ToricError {
    #[error("ray {kind} {index} is not primitive")]
    NonPrimitiveRay { kind: RayKind, index: usize },
    #[error("mu_{index} does not lie in the invariant lattice: {diagnostic}")]
    NotInLattice { index: usize, diagnostic: String },
    #[error("vertices do not form a spanning simplex with a positive relation")]
    DegenerateSimplex,
    #[error("pairing produced a negative Cox exponent")]
    NegativeExponent,
    #[error("ambient verification failed at clause: {clause}")]
    VerificationFailed { clause: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The lattice `M = { m in Z^{n+1} : sum m_j c_j = 0, m . phase(h) in Z for
/// all h in G }` of degree-zero `G`-invariant Laurent exponents.
#[derive(Clone, Debug)]
pub struct GradedInvariantLattice {
    weights: WeightSystem,
    group: DiagonalGroup,
    basis: LatticeBasis,
}

impl GradedInvariantLattice {
    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }

    pub fn group(&self) -> &DiagonalGroup {
        &self.group
    }

    /// Canonical basis of `M`; columns are the basis vectors in `Z^{n+1}`.
    pub fn basis(&self) -> &LatticeBasis {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }
}

/// Depends only on the weight system and the group, not on which invertible
/// polynomial realizes the weights.
pub fn build_invariant_lattice(w: &WeightSystem, g: &DiagonalGroup) -> GradedInvariantLattice {
    let n1 = w.num_vars();
    assert_eq!(g.num_vars(), n1);
    let k = g.generators().len();
    // Constraints on (m, t) in Z^{n1 + k}: c . m = 0 and g_i . m = t_i.
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(1 + k);
    let mut crow: Vec<BigRational> = w
        .weights()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    crow.extend(vec![BigRational::zero(); k]);
    rows.push(crow);
    for (i, gen) in g.generators().iter().enumerate() {
        let mut row: Vec<BigRational> = gen.phases().to_vec();
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
        .map(|v| v[..n1].to_vec())
        .collect();
    let basis = LatticeBasis::from_generators(n1, &IntMat::from_rows(&projected).transpose());
    assert_eq!(basis.rank(), n1 - 1, "invariant lattice has rank n");
    GradedInvariantLattice {
        weights: w.clone(),
        group: g.clone(),
        basis,
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum RayKind {
    Nu,
    Mu,
}

impl std::fmt::Display for RayKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RayKind::Nu => write!(f, "nu"),
            RayKind::Mu => write!(f, "mu"),
        }
    }
}

/// A distinguished lattice point: `nu_j` lives in the rank-`n` dual of `M`
/// (coords = `j`-th row of the basis matrix), `mu_i` lives in `M` itself
/// (ambient coords in `Z^{n+1}`, coords in the canonical basis).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayPoint {
    pub kind: RayKind,
    pub index: usize,
    pub ambient: Vec<BigInt>,
    pub coords: Vec<BigInt>,
}

/// The functionals `m -> m_j` restricted to `M`, expressed in the dual of the
/// canonical basis. They satisfy `sum c_j nu_j = 0` and are primitive.
pub fn nu_points(m: &GradedInvariantLattice) -> Result<Vec<RayPoint>, ToricError> {
    let n1 = m.weights().num_vars();
    let b = m.basis().matrix();
    let mut out = Vec::with_capacity(n1);
    for j in 0..n1 {
        let coords = b.row(j);
        if gcd_vec(&coords) != BigInt::one() {
            return Err(ToricError::NonPrimitiveRay {
                kind: RayKind::Nu,
                index: j,
            });
        }
        let mut ambient = vec![BigInt::zero(); n1];
        ambient[j] = BigInt::one();
        out.push(RayPoint {
            kind: RayKind::Nu,
            index: j,
            ambient,
            coords,
        });
    }
    // sum c_j nu_j = 0 holds because every basis vector has degree zero.
    let rank = m.rank();
    for k in 0..rank {
        let s: BigInt = (0..n1)
            .map(|j| m.weights().weights()[j].clone() * &out[j].coords[k])
            .sum();
        assert!(s.is_zero(), "weighted sum of nu rays must vanish");
    }
    Ok(out)
}

/// `mu_i = row_i(E) - (1,...,1)`, lying in `M` exactly when the pair is of
/// Calabi-Yau type; primitivity reflects nondegeneracy of the transpose.
pub fn mu_points(
    e: &ExponentMatrix,
    m: &GradedInvariantLattice,
) -> Result<Vec<RayPoint>, ToricError> {
    let n1 = e.size();
    assert_eq!(m.weights().num_vars(), n1);
    let mut out = Vec::with_capacity(n1);
    for i in 0..n1 {
        let ambient: Vec<BigInt> = e
            .matrix()
            .row(i)
            .into_iter()
            .map(|x| x - BigInt::one())
            .collect();
        let coords = m.basis().integer_coordinates(&ambient).ok_or_else(|| {
            ToricError::NotInLattice {
                index: i,
                diagnostic: lattice_failure_diagnostic(m),
            }
        })?;
        match is_primitive(&ambient, m.basis()) {
            Ok(true) => {}
            _ => {
                return Err(ToricError::NonPrimitiveRay {
                    kind: RayKind::Mu,
                    index: i,
                })
            }
        }
        out.push(RayPoint {
            kind: RayKind::Mu,
            index: i,
            ambient,
            coords,
        });
    }
    Ok(out)
}

fn lattice_failure_diagnostic(m: &GradedInvariantLattice) -> String {
    let mut reasons = Vec::new();
    if !is_calabi_yau(m.weights()) {
        reasons.push("Calabi-Yau condition fails (sum of weights != degree)");
    }
    if !m.group().contains(&exponential_element(m.weights())) {
        reasons.push("group does not contain the exponential element");
    }
    if !is_special_linear(m.group()) {
        reasons.push("group is not contained in SL");
    }
    if reasons.is_empty() {
        reasons.push("unexpected: CY-type hypotheses hold");
    }
    reasons.join("; ")
}

/// `(i, j)` entry `<mu_i, nu_j>`; always equals `E - 1` entrywise.
pub fn pairing_matrix(mus: &[RayPoint], nus: &[RayPoint]) -> IntMat {
    let mut out = IntMat::zero(mus.len(), nus.len());
    for (i, mu) in mus.iter().enumerate() {
        for (j, nu) in nus.iter().enumerate() {
            *out.at_mut(i, j) = mu
                .coords
                .iter()
                .zip(&nu.coords)
                .map(|(a, b)| a * b)
                .sum();
        }
    }
    out
}

/// Complete simplex fan: `n+1` primitive vertices spanning rank `n` with a
/// unique all-positive primitive relation. Cones are implicit (all proper
/// subsets of the vertex set).
#[derive(Clone, Debug)]
pub struct SimplexFan {
    rank: usize,
    vertices: Vec<RayPoint>,
    relation: Vec<BigInt>,
}

impl SimplexFan {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertices(&self) -> &[RayPoint] {
        &self.vertices
    }

    /// The positive primitive vector `b` with `sum b_i vertex_i = 0`.
    pub fn relation(&self) -> &[BigInt] {
        &self.relation
    }
}

/// Fan over the `mu_i` (or, with roles swapped, over the `nu_j`).
pub fn dual_fan(vertices: &[RayPoint]) -> Result<SimplexFan, ToricError> {
    let count = vertices.len();
    if count == 0 {
        return Err(ToricError::DegenerateSimplex);
    }
    let rank = vertices[0].coords.len();
    if count != rank + 1 {
        return Err(ToricError::DegenerateSimplex);
    }
    // Columns are the vertex coordinates; the relation is the kernel.
    let cols: Vec<Vec<BigInt>> = vertices.iter().map(|v| v.coords.clone()).collect();
    let mat = IntMat::from_rows(&cols).transpose();
    let kernel = kernel_lattice(&mat.to_rational());
    if kernel.rank() != 1 {
        return Err(ToricError::DegenerateSimplex);
    }
    let mut relation = kernel.basis_vector(0);
    if relation.iter().any(|x| x.is_negative()) {
        if relation.iter().any(|x| x.is_positive()) {
            return Err(ToricError::DegenerateSimplex);
        }
        for x in &mut relation {
            *x = -x.clone();
        }
    }
    if relation.iter().any(|x| !x.is_positive()) {
        return Err(ToricError::DegenerateSimplex);
    }
    debug_assert_eq!(gcd_vec(&relation), BigInt::one());
    Ok(SimplexFan {
        rank,
        vertices: vertices.to_vec(),
        relation,
    })
}

/// One sampled check of the group-action identification: a quotient generator
/// `m` of `M / <mu_i>`, the phase vector it induces, and whether the two
/// exact computations of that phase agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionCheck {
    pub generator_coords: Vec<BigInt>,
    pub phase: PhaseVector,
    pub passed: bool,
}

/// Structure of the ambient space of the fan: relation weights and the finite
/// quotient `M / <mu_i>`.
#[derive(Clone, Debug)]
pub struct AmbientReport {
    pub relation_weights: Vec<BigInt>,
    pub quotient_invariants: AbelianInvariants,
    /// Generators of `M / <mu_i>` aligned with the invariant factors, in
    /// basis coordinates.
    pub quotient_generators: Vec<Vec<BigInt>>,
    pub action_checks: Vec<ActionCheck>,
}

pub fn ambient_structure(f: &SimplexFan, m: &GradedInvariantLattice) -> AmbientReport {
    let n = m.rank();
    assert_eq!(f.rank(), n);
    let gen_cols: Vec<Vec<BigInt>> = f.vertices().iter().map(|v| v.coords.clone()).collect();
    let sub = LatticeBasis::from_generators(n, &IntMat::from_rows(&gen_cols).transpose());
    assert_eq!(sub.rank(), n, "mu points span M over Q");
    // Z^n / col(C): with U C V = D diagonal, the class of U^{-1} e_i
    // generates the i-th cyclic factor of order d_i.
    let (u, d, _) = smith_with_transforms(sub.matrix());
    let u_inv = u.int_inverse().expect("u is unimodular");
    let mut factors = Vec::new();
    let mut generators = Vec::new();
    for i in 0..n {
        let di = d.at(i, i).clone();
        if di > BigInt::one() {
            factors.push(di);
            generators.push(u_inv.col(i));
        }
    }
    AmbientReport {
        relation_weights: f.relation().to_vec(),
        quotient_invariants: AbelianInvariants::new(factors),
        quotient_generators: generators,
        action_checks: Vec::new(),
    }
}

/// Named outcome of one verification clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Full verification record for the mirror-ambient identification.
#[derive(Clone, Debug)]
pub struct AmbientVerification {
    pub report: AmbientReport,
    pub clauses: Vec<ClauseResult>,
}

impl AmbientVerification {
    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn ensure(&self) -> Result<(), ToricError> {
        match self.clauses.iter().find(|c| !c.passed) {
            None => Ok(()),
            Some(c) => Err(ToricError::VerificationFailed {
                clause: format!("{}: {}", c.name, c.detail),
            }),
        }
    }
}

/// Checks, with exact arithmetic, that the ambient space of the dual fan is
/// the quotient of weighted projective space predicted by the transposed
/// pair: (a) the fan relation reproduces the transpose weight system, (b) the
/// quotient `M / <mu_i>` has the invariants of `G^T / <j_{W^T}>`, and (c) the
/// induced group action matches phase-by-phase on quotient generators, which
/// together with `j_{W^T}` must regenerate `G^T`.
pub fn verify_mirror_ambient(
    e: &ExponentMatrix,
    g: &DiagonalGroup,
) -> Result<AmbientVerification, ToricError> {
    let w = weight_system(e)?;
    let m = build_invariant_lattice(&w, g);
    let mus = mu_points(e, &m)?;
    let fan = dual_fan(&mus)?;
    let mut report = ambient_structure(&fan, &m);
    let mut clauses = Vec::new();

    let et = transpose(e);
    let wt = weight_system(&et)?;
    let a_ok = report.relation_weights == wt.weights();
    clauses.push(ClauseResult {
        name: "relation-weights".into(),
        passed: a_ok,
        detail: format!(
            "fan relation {:?} vs transpose weights {:?} (degree {})",
            report.relation_weights,
            wt.weights(),
            wt.degree()
        ),
    });

    let gt = dual_group(e, g);
    let jt = exponential_element(&wt);
    let gt_tilde = quotient_by_j(&gt, &jt).map_err(|_| ToricError::VerificationFailed {
        clause: "dual group does not contain its exponential element".into(),
    })?;
    let b_ok = report.quotient_invariants == gt_tilde.invariants;
    clauses.push(ClauseResult {
        name: "quotient-invariants".into(),
        passed: b_ok,
        detail: format!(
            "M/<mu> = {} vs reduced dual group {}",
            report.quotient_invariants, gt_tilde.invariants
        ),
    });

    // Clause (c): for each quotient generator m, solve sum r_i mu_i = m and
    // compare r - (sum r_i) p with the direct solve of E^T x = (ambient m),
    // where p solves E^T p = (1,...,1). The two agree exactly; the reduced
    // phases plus j_{W^T} must regenerate G^T.
    let n1 = e.size();
    let et_q = et.matrix().to_rational();
    let ones = vec![BigRational::one(); n1];
    let p = solve_rational(&et_q, &ones).expect("exponent matrix is nonsingular");
    let bt_rows: Vec<Vec<BigRational>> = (0..m.rank())
        .map(|k| {
            mus.iter()
                .map(|mu| BigRational::from_integer(mu.coords[k].clone()))
                .collect()
        })
        .collect();
    let bt = QMat::from_rows(&bt_rows);
    let mut c_ok = true;
    let mut quotient_phases = Vec::new();
    for gen in &report.quotient_generators {
        let rhs: Vec<BigRational> = gen
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        let r = solve_rational_general(&bt, &rhs)
            .expect("dimensions agree")
            .expect("mu points span M over Q");
        let rsum: BigRational = r.iter().sum();
        let t: Vec<BigRational> = r
            .iter()
            .zip(&p)
            .map(|(ri, pi)| ri - &rsum * pi)
            .collect();
        let ambient_m = m.basis().matrix().mul_vec(gen);
        let ambient_q: Vec<BigRational> = ambient_m
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        let direct = solve_rational(&et_q, &ambient_q).expect("nonsingular");
        let passed = t == direct;
        c_ok &= passed;
        let phase = PhaseVector::new(t);
        quotient_phases.push(phase.clone());
        report.action_checks.push(ActionCheck {
            generator_coords: gen.clone(),
            phase,
            passed,
        });
    }
    // Generation check: the induced phases together with j_{W^T} give G^T.
    let mut regen = quotient_phases;
    regen.push(jt.clone());
    let regenerated = DiagonalGroup::from_generators(n1, regen);
    let gen_ok = regenerated == gt;
    c_ok &= gen_ok;
    clauses.push(ClauseResult {
        name: "group-action".into(),
        passed: c_ok,
        detail: format!(
            "{} generator check(s); regeneration of dual group: {}",
            report.action_checks.len(),
            gen_ok
        ),
    });

    Ok(AmbientVerification { report, clauses })
}

/// The anticanonical section of the fan: one monomial per dual point, with
/// Cox exponent `<vertex_i, dual_j> + 1` on the `i`-th coordinate. On the fan
/// over the `mu_i` with duals `nu_j` this is the transposed polynomial; with
/// the roles swapped it reproduces the original.
pub fn hypersurface_section(
    f: &SimplexFan,
    duals: &[RayPoint],
) -> Result<Polynomial, ToricError> {
    let mut monomials = Vec::with_capacity(duals.len());
    for dual in duals {
        let mut mono = Vec::with_capacity(f.vertices().len());
        for v in f.vertices() {
            let pairing: BigInt = v
                .coords
                .iter()
                .zip(&dual.coords)
                .map(|(a, b)| a * b)
                .sum();
            let exp = pairing + BigInt::one();
            if exp.is_negative() {
                return Err(ToricError::NegativeExponent);
            }
            mono.push(u64::try_from(exp).map_err(|_| ToricError::NegativeExponent)?);
        }
        monomials.push(mono);
    }
    Ok(Polynomial::new(monomials)?)
}
