//! Explicit birational identification of two mirrors that share a weight
//! system and a symmetry group.
//!
//! Both mirror hypersurfaces contain the torus chart `{ sum_j t^(nu_j) = 0 }`
//! of the shared lattice `M` as a dense open subset. The atlas stores that
//! Laurent chart once, plus one monomial dehomogenization map per side from
//! the Cox coordinates of its ambient space down to the torus. A seeded
//! rational-point probe then witnesses the identification numerically, in
//! exact arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::latticealg::{solve_integer, IntMat};
use crate::poly::{weight_system, ExponentMatrix, PolyError, Polynomial};
use crate::symmetry::{is_cy_type, DiagonalGroup, SymError};
use crate::toric::{
    ambient_structure, build_invariant_lattice, dual_fan, hypersurface_section, mu_points,
    nu_points, pairing_matrix, GradedInvariantLattice, ToricError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MirrorError {
    #[error("shared setup check failed: {0}")]
    SetupMismatch(String),
    #[error("probe failed at sample {sample}: torus point ({point})")]
    ProbeFailure { sample: usize, point: String },
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Sum of monomials with integer (possibly negative) exponents and unit
/// coefficients, in torus coordinates `t1..tn`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPolynomial {
    num_vars: usize,
    terms: Vec<Vec<BigInt>>,
}

impl LaurentPolynomial {
    pub fn new(num_vars: usize, mut terms: Vec<Vec<BigInt>>) -> Self {
        assert!(terms.iter().all(|t| t.len() == num_vars));
        terms.sort();
        LaurentPolynomial { num_vars, terms }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> &[Vec<BigInt>] {
        &self.terms
    }

    pub fn eval(&self, t: &[BigRational]) -> BigRational {
        assert_eq!(t.len(), self.num_vars);
        self.terms
            .iter()
            .map(|term| {
                term.iter()
                    .zip(t)
                    .fold(BigRational::one(), |acc, (e, ti)| acc * rat_pow(ti, e))
            })
            .sum()
    }
}

impl std::fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        for term in &self.terms {
            let factors: Vec<String> = term
                .iter()
                .enumerate()
                .filter(|(_, e)| !e.is_zero())
                .map(|(k, e)| {
                    if e.is_one() {
                        format!("t{}", k + 1)
                    } else {
                        format!("t{}^{}", k + 1, e)
                    }
                })
                .collect();
            if factors.is_empty() {
                parts.push("1".to_string());
            } else {
                parts.push(factors.join("*"));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

fn rat_pow(b: &BigRational, e: &BigInt) -> BigRational {
    let ei = e.to_i64().expect("exponent fits in i64");
    let a = ei.unsigned_abs() as u32;
    // b is stored reduced, so its powers are already in lowest terms; skip
    // the gcd that BigRational::new would run.
    let (mut n, mut d) = if ei < 0 {
        (b.denom().pow(a), b.numer().pow(a))
    } else {
        (b.numer().pow(a), b.denom().pow(a))
    };
    if d.sign() == num_bigint::Sign::Minus {
        n = -n;
        d = -d;
    }
    BigRational::new_raw(n, d)
}

/// One side of the atlas: an exponent matrix, its transposed hypersurface
/// section in Cox coordinates, and the monomial map
/// `t_k = prod_i Y_i^{dehom[i][k]}` to the shared torus.
#[derive(Clone, Debug)]
pub struct AtlasSide {
    pub exponent_matrix: ExponentMatrix,
    pub section: Polynomial,
    /// Rows are the basis coordinates of the `mu_i`.
    pub dehom: IntMat,
    /// Exponent of the finite quotient acting on the side's ambient space.
    pub quotient_exponent: BigInt,
}

impl AtlasSide {
    pub fn dehom_description(&self) -> Vec<String> {
        let (n1, n) = (self.dehom.rows(), self.dehom.cols());
        (0..n)
            .map(|k| {
                let factors: Vec<String> = (0..n1)
                    .filter(|&i| !self.dehom.at(i, k).is_zero())
                    .map(|i| {
                        if self.dehom.at(i, k).is_one() {
                            format!("Y{i}")
                        } else {
                            format!("Y{i}^{}", self.dehom.at(i, k))
                        }
                    })
                    .collect();
                format!("t{} = {}", k + 1, factors.join("*"))
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct BirationalAtlas {
    pub m_basis: IntMat,
    pub shared_chart: LaurentPolynomial,
    pub sides: [AtlasSide; 2],
}

/// Verdict of the hypotheses for a multiple-mirror comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetupVerdict {
    pub weights_match: bool,
    pub group_acts_on_both: bool,
    pub cy_type_both: bool,
    pub reason: Option<String>,
}

impl SetupVerdict {
    pub fn ok(&self) -> bool {
        self.weights_match && self.group_acts_on_both && self.cy_type_both
    }
}

pub fn shared_setup_check(
    e1: &ExponentMatrix,
    e2: &ExponentMatrix,
    g: &DiagonalGroup,
) -> Result<SetupVerdict, MirrorError> {
    let w1 = weight_system(e1)?;
    let w2 = weight_system(e2)?;
    let weights_match = w1.weights() == w2.weights() && w1.degree() == w2.degree();
    let acts = |e: &ExponentMatrix| {
        let aut = crate::symmetry::aut_group(e);
        g.generators().iter().all(|x| aut.contains(x))
    };
    let group_acts_on_both = acts(e1) && acts(e2);
    let cy_type_both = group_acts_on_both
        && is_cy_type(e1, g)?.holds()
        && is_cy_type(e2, g)?.holds();
    let mut reason = None;
    if !weights_match {
        reason = Some("weight systems differ".to_string());
    } else if !group_acts_on_both {
        reason = Some("group is not a symmetry of both polynomials".to_string());
    } else if !cy_type_both {
        reason = Some("pair is not of Calabi-Yau type on both sides".to_string());
    }
    Ok(SetupVerdict {
        weights_match,
        group_acts_on_both,
        cy_type_both,
        reason,
    })
}

fn build_side(
    e: &ExponentMatrix,
    m: &GradedInvariantLattice,
    nus: &[crate::toric::RayPoint],
) -> Result<AtlasSide, MirrorError> {
    let mus = mu_points(e, m)?;
    let fan = dual_fan(&mus)?;
    let section = hypersurface_section(&fan, nus)?;
    // Pulling the chart back along the dehomogenization and multiplying by
    // prod Y_i must recover the section: equivalent to pairing + 1 = E.
    let pm = pairing_matrix(&mus, nus);
    for i in 0..e.size() {
        for j in 0..e.size() {
            assert_eq!(
                pm.at(i, j) + BigInt::one(),
                *e.matrix().at(i, j),
                "dehomogenized chart does not match the section"
            );
        }
    }
    let n1 = e.size();
    let n = m.rank();
    let mut dehom = IntMat::zero(n1, n);
    for (i, mu) in mus.iter().enumerate() {
        for k in 0..n {
            *dehom.at_mut(i, k) = mu.coords[k].clone();
        }
    }
    let report = ambient_structure(&fan, m);
    let quotient_exponent = report
        .quotient_invariants
        .factors()
        .last()
        .cloned()
        .unwrap_or_else(BigInt::one);
    Ok(AtlasSide {
        exponent_matrix: e.clone(),
        section,
        dehom,
        quotient_exponent,
    })
}

/// Builds the shared torus chart and the two dehomogenization maps. The
/// `nu_j` depend only on the weights and the group, so both sides see the
/// same Laurent polynomial; this is verified term by term.
pub fn common_chart(
    e1: &ExponentMatrix,
    e2: &ExponentMatrix,
    g: &DiagonalGroup,
) -> Result<BirationalAtlas, MirrorError> {
    let verdict = shared_setup_check(e1, e2, g)?;
    if !verdict.ok() {
        return Err(MirrorError::SetupMismatch(
            verdict.reason.unwrap_or_else(|| "unknown".into()),
        ));
    }
    let w = weight_system(e1)?;
    let m1 = build_invariant_lattice(&w, g);
    let m2 = build_invariant_lattice(&weight_system(e2)?, g);
    assert_eq!(m1.basis(), m2.basis(), "invariant lattices must agree");
    let nus1 = nu_points(&m1)?;
    let nus2 = nu_points(&m2)?;
    let chart1 = LaurentPolynomial::new(m1.rank(), nus1.iter().map(|nu| nu.coords.clone()).collect());
    let chart2 = LaurentPolynomial::new(m2.rank(), nus2.iter().map(|nu| nu.coords.clone()).collect());
    assert_eq!(chart1, chart2, "shared chart must be term-identical");
    let side1 = build_side(e1, &m1, &nus1)?;
    let side2 = build_side(e2, &m1, &nus1)?;
    Ok(BirationalAtlas {
        m_basis: m1.basis().matrix().clone(),
        shared_chart: chart1,
        sides: [side1, side2],
    })
}

/// Outcome of the seeded probe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeRecord {
    pub samples: usize,
    pub passes: usize,
    pub seed: u64,
}

/// Draws `samples` rational torus points (deterministically from `seed`) and
/// verifies at each that both sides' Cox sections, evaluated on a lift of the
/// point, equal the predicted monomial multiple of the shared chart value.
pub fn rational_point_probe(
    atlas: &BirationalAtlas,
    samples: usize,
    seed: u64,
) -> Result<ProbeRecord, MirrorError> {
    let n = atlas.shared_chart.num_vars();
    // Common lifting exponent h: h times every standard vector must lie in
    // the column span of each side's dehomogenization matrix, so h is the
    // lcm of the exponents of the two cokernels. Computing it from the
    // matrices themselves keeps the probe honest on corrupted atlases.
    let mut h = BigInt::one();
    for side in &atlas.sides {
        let (_, inv) = crate::latticealg::smith_normal_form(&side.dehom);
        let full_rank = crate::latticealg::rank(&side.dehom) == n;
        if !full_rank {
            return Err(MirrorError::ProbeFailure {
                sample: 0,
                point: "degenerate dehomogenization map".into(),
            });
        }
        if let Some(last) = inv.factors().last() {
            h = num_integer::lcm(h, last.clone());
        }
    }
    // Per side, an integer matrix T with dehom^T * T = h * I: it turns a base
    // point s into Cox coordinates Y_i = prod_k s_k^(T[i][k]) lying over the
    // torus point t = s^h.
    let mut lifts = Vec::new();
    for side in &atlas.sides {
        let a = side.dehom.transpose();
        let n1 = side.dehom.rows();
        let mut t = IntMat::zero(n1, n);
        for k in 0..n {
            let mut rhs = vec![BigInt::zero(); n];
            rhs[k] = h.clone();
            let col = solve_integer(&a, &rhs).expect("h kills the quotient, lift exists");
            for i in 0..n1 {
                *t.at_mut(i, k) = col[i].clone();
            }
        }
        lifts.push(t);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passes = 0;
    for sample in 0..samples {
        let s: Vec<BigRational> = (0..n)
            .map(|_| {
                let mut numer: i64 = rng.gen_range(1..=97);
                if rng.gen_bool(0.5) {
                    numer = -numer;
                }
                let denom: i64 = rng.gen_range(1..=97);
                BigRational::new(BigInt::from(numer), BigInt::from(denom))
            })
            .collect();
        let t: Vec<BigRational> = s.iter().map(|si| rat_pow(si, &h)).collect();
        let chart_value = atlas.shared_chart.eval(&t);
        for (side, lift) in atlas.sides.iter().zip(&lifts) {
            let n1 = side.dehom.rows();
            let y: Vec<BigRational> = (0..n1)
                .map(|i| {
                    (0..n).fold(BigRational::one(), |acc, k| {
                        acc * rat_pow(&s[k], lift.at(i, k))
                    })
                })
                .collect();
            // Check the dehomogenization maps on the lift itself.
            let t_back: Vec<BigRational> = (0..n)
                .map(|k| {
                    (0..n1).fold(BigRational::one(), |acc, i| {
                        acc * rat_pow(&y[i], side.dehom.at(i, k))
                    })
                })
                .collect();
            let section_value: BigRational = side
                .section
                .canonical_monomials()
                .iter()
                .map(|mono| {
                    mono.iter()
                        .zip(&y)
                        .fold(BigRational::one(), |acc, (&e, yi)| {
                            acc * rat_pow(yi, &BigInt::from(e))
                        })
                })
                .sum();
            let unit: BigRational = y.iter().product();
            let expected = &unit * &chart_value;
            if t_back != t || section_value != expected {
                return Err(MirrorError::ProbeFailure {
                    sample,
                    point: t
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                });
            }
        }
        passes += 1;
    }
    Ok(ProbeRecord {
        samples,
        passes,
        seed,
    })
}
