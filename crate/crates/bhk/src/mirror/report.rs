//! Aggregated mirror report with a stable, deterministic JSON shape.
//!
//! All exact values are serialized as strings (rationals as `a/b`), field
//! order is fixed by struct order, and no hash-based containers are used, so
//! identical inputs always produce byte-identical JSON.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::latticealg::{AbelianInvariants, IntMat};
use crate::poly::{
    atom_decomposition, exponent_matrix, transpose, weight_system, ExponentMatrix, Polynomial,
};
use crate::symmetry::{
    aut_group, dual_group, exponential_element, is_cy_type, is_special_linear, quotient_by_j,
    DiagonalGroup, PhaseVector,
};
use crate::toric::{
    build_invariant_lattice, mu_points, nu_points, pairing_matrix, verify_mirror_ambient,
};

use super::atlas::{BirationalAtlas, MirrorError, ProbeRecord};

fn invariants_out(inv: &AbelianInvariants) -> Vec<String> {
    inv.factors().iter().map(|x| x.to_string()).collect()
}

fn phases_out(p: &PhaseVector) -> String {
    p.phases()
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn int_matrix_out(m: &IntMat) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.at(r, c).to_string()).collect())
        .collect()
}

fn int_vec_out(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct InputEcho {
    pub polynomial: String,
    pub group: Vec<String>,
    pub index_shift: u64,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct WeightsOut {
    pub c: Vec<String>,
    pub d: String,
    pub q: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct CalabiYauOut {
    pub holds: bool,
    pub cy_condition: bool,
    pub contains_j: bool,
    pub special_linear: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct GroupSummaryOut {
    pub order: String,
    pub invariants: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct GroupOut {
    pub order: String,
    pub invariants: Vec<String>,
    pub is_sl: bool,
    pub contains_j: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct TransposeOut {
    pub exponent_matrix: Vec<Vec<String>>,
    pub weights: WeightsOut,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct DualGroupOut {
    pub generators: Vec<String>,
    pub order: String,
    pub invariants: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct QuotientOut {
    pub invariants: Vec<String>,
    pub generators: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct QuotientsOut {
    pub g_tilde: QuotientOut,
    pub gt_tilde: QuotientOut,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ToricOut {
    pub m_basis: Vec<Vec<String>>,
    pub nu: Vec<Vec<String>>,
    pub mu: Vec<Vec<String>>,
    pub pairing_ok: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ClauseOut {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct AmbientOut {
    pub relation_weights: Vec<String>,
    pub quotient_invariants: Vec<String>,
    pub verified: bool,
    pub clauses: Vec<ClauseOut>,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct ProbeOut {
    pub samples: usize,
    pub passes: usize,
    pub seed: u64,
}

#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct AtlasOut {
    pub shared_chart: String,
    pub dehom_maps: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeOut>,
}

/// Full analysis of one `(W, G)` pair. Serialized field order is the stable
/// report schema.
#[derive(Serialize, Deserialize, Clone, Debug)]
pub struct MirrorReport {
    pub input: InputEcho,
    pub exponent_matrix: Vec<Vec<String>>,
    pub weights: WeightsOut,
    pub calabi_yau: CalabiYauOut,
    pub atoms: Vec<String>,
    pub aut: GroupSummaryOut,
    pub group: GroupOut,
    pub transpose: TransposeOut,
    pub dual_group: DualGroupOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotients: Option<QuotientsOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub toric: Option<ToricOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ambient: Option<AmbientOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atlas: Option<AtlasOut>,
}

fn weights_out(e: &ExponentMatrix) -> Result<WeightsOut, MirrorError> {
    let w = weight_system(e)?;
    Ok(WeightsOut {
        c: int_vec_out(w.weights()),
        d: w.degree().to_string(),
        q: w.fractional().iter().map(|x| x.to_string()).collect(),
    })
}

/// Runs the whole construction for `(W, G)`. Requires `G <= Aut(W)`. The
/// toric, quotient, and ambient sections are present iff the pair is of
/// Calabi-Yau type.
pub fn mirror_pipeline(p: &Polynomial, g: &DiagonalGroup) -> Result<MirrorReport, MirrorError> {
    let e = exponent_matrix(p)?;
    let aut = aut_group(&e);
    for gen in g.generators() {
        if !aut.contains(gen) {
            return Err(MirrorError::Sym(crate::symmetry::SymError::NotInAmbient));
        }
    }
    let w = weight_system(&e)?;
    let j = exponential_element(&w);
    let cy = is_cy_type(&e, g)?;
    let atoms = atom_decomposition(&e)?;
    let et = transpose(&e);
    let wt = weight_system(&et)?;
    let gt = dual_group(&e, g);
    let jt = exponential_element(&wt);

    // The exponential element of W is the product of the canonical
    // generators of Aut(W); cheap consistency check of the whole setup.
    let prod = aut
        .generators()
        .iter()
        .fold(PhaseVector::zero(e.size()), |acc, x| acc.add(x));
    debug_assert_eq!(prod, j);

    let mut report = MirrorReport {
        input: InputEcho {
            polynomial: p.to_string(),
            group: g.generators().iter().map(phases_out).collect(),
            index_shift: p.index_shift(),
        },
        exponent_matrix: int_matrix_out(e.matrix()),
        weights: weights_out(&e)?,
        calabi_yau: CalabiYauOut {
            holds: cy.holds(),
            cy_condition: cy.calabi_yau,
            contains_j: cy.contains_j,
            special_linear: cy.special_linear,
            diagnostic: cy.diagnostic(),
        },
        atoms: atoms
            .describe()
            .split(" + ")
            .map(|s| s.to_string())
            .collect(),
        aut: GroupSummaryOut {
            order: aut.order().to_string(),
            invariants: invariants_out(aut.invariants()),
        },
        group: GroupOut {
            order: g.order().to_string(),
            invariants: invariants_out(g.invariants()),
            is_sl: is_special_linear(g),
            contains_j: g.contains(&j),
        },
        transpose: TransposeOut {
            exponent_matrix: int_matrix_out(et.matrix()),
            weights: weights_out(&et)?,
        },
        dual_group: DualGroupOut {
            generators: gt.generators().iter().map(phases_out).collect(),
            order: gt.order().to_string(),
            invariants: invariants_out(gt.invariants()),
        },
        quotients: None,
        toric: None,
        ambient: None,
        atlas: None,
    };

    if cy.holds() {
        let g_tilde = quotient_by_j(g, &j)?;
        let gt_tilde = quotient_by_j(&gt, &jt)?;
        report.quotients = Some(QuotientsOut {
            g_tilde: QuotientOut {
                invariants: invariants_out(&g_tilde.invariants),
                generators: g_tilde.generators.iter().map(phases_out).collect(),
            },
            gt_tilde: QuotientOut {
                invariants: invariants_out(&gt_tilde.invariants),
                generators: gt_tilde.generators.iter().map(phases_out).collect(),
            },
        });
        let m = build_invariant_lattice(&w, g);
        let nus = nu_points(&m)?;
        let mus = mu_points(&e, &m)?;
        let pm = pairing_matrix(&mus, &nus);
        let pairing_ok = (0..e.size()).all(|i| {
            (0..e.size()).all(|jx| pm.at(i, jx) + BigInt::from(1) == *e.matrix().at(i, jx))
        });
        report.toric = Some(ToricOut {
            m_basis: int_matrix_out(m.basis().matrix()),
            nu: nus.iter().map(|x| int_vec_out(&x.coords)).collect(),
            mu: mus.iter().map(|x| int_vec_out(&x.coords)).collect(),
            pairing_ok,
        });
        let verification = verify_mirror_ambient(&e, g)?;
        report.ambient = Some(AmbientOut {
            relation_weights: int_vec_out(&verification.report.relation_weights),
            quotient_invariants: invariants_out(&verification.report.quotient_invariants),
            verified: verification.passed(),
            clauses: verification
                .clauses
                .iter()
                .map(|c| ClauseOut {
                    name: c.name.clone(),
                    passed: c.passed,
                    detail: c.detail.clone(),
                })
                .collect(),
        });
    }
    Ok(report)
}

/// Attaches a comparison atlas (and optional probe outcome) to a report.
pub fn atlas_section(atlas: &BirationalAtlas, probe: Option<&ProbeRecord>) -> AtlasOut {
    AtlasOut {
        shared_chart: atlas.shared_chart.to_string(),
        dehom_maps: atlas.sides.iter().map(|s| s.dehom_description()).collect(),
        probe: probe.map(|p| ProbeOut {
            samples: p.samples,
            passes: p.passes,
            seed: p.seed,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::symmetry::subgroup;

    fn report_for(text: &str) -> MirrorReport {
        let p = parse_polynomial(text).unwrap();
        let e = exponent_matrix(&p).unwrap();
        let w = weight_system(&e).unwrap();
        let g = subgroup(vec![exponential_element(&w)], &aut_group(&e)).unwrap();
        mirror_pipeline(&p, &g).unwrap()
    }

    #[test]
    fn fermat_quintic_report_facts() {
        let r = report_for("x0^5+x1^5+x2^5+x3^5+x4^5");
        assert_eq!(r.weights.c, vec!["1"; 5]);
        assert_eq!(r.weights.d, "5");
        assert!(r.calabi_yau.holds);
        assert_eq!(r.aut.order, "3125");
        assert_eq!(r.group.order, "5");
        assert_eq!(r.dual_group.order, "625");
        assert_eq!(r.dual_group.invariants, vec!["5"; 4]);
        let q = r.quotients.unwrap();
        assert_eq!(q.gt_tilde.invariants, vec!["5"; 3]);
        let a = r.ambient.unwrap();
        assert!(a.verified);
        assert_eq!(a.relation_weights, vec!["1"; 5]);
        assert_eq!(a.quotient_invariants, vec!["5"; 3]);
        assert!(r.toric.unwrap().pairing_ok);
    }

    #[test]
    fn chain_quintic_report_facts() {
        let r = report_for("x0^4*x1+x1^4*x2+x2^4*x3+x3^4*x4+x4^5");
        assert_eq!(
            r.transpose.weights.c,
            vec!["64", "48", "52", "51", "41"]
        );
        assert_eq!(r.transpose.weights.d, "256");
        assert_eq!(r.dual_group.order, "256");
        assert_eq!(r.dual_group.invariants, vec!["256"]);
        let q = r.quotients.unwrap();
        assert!(q.gt_tilde.invariants.is_empty());
        let a = r.ambient.unwrap();
        assert!(a.verified);
        assert_eq!(a.relation_weights, vec!["64", "48", "52", "51", "41"]);
    }

    #[test]
    fn mixed_quintic_report_facts() {
        let r = report_for("x0^4*x1+x1^5+x2^5+x3^5+x4^5");
        assert_eq!(r.transpose.weights.c, vec!["5", "3", "4", "4", "4"]);
        assert_eq!(r.transpose.weights.d, "20");
        assert_eq!(r.dual_group.order, "500");
        let q = r.quotients.unwrap();
        assert_eq!(q.gt_tilde.invariants, vec!["5", "5"]);
        let a = r.ambient.unwrap();
        assert!(a.verified);
        assert_eq!(a.relation_weights, vec!["5", "3", "4", "4", "4"]);
        assert_eq!(a.quotient_invariants, vec!["5", "5"]);
    }

    #[test]
    fn non_cy_input_omits_toric_sections() {
        let p = parse_polynomial("x0^3").unwrap();
        let e = exponent_matrix(&p).unwrap();
        let g = crate::symmetry::DiagonalGroup::trivial(1);
        let _ = e;
        let r = mirror_pipeline(&p, &g).unwrap();
        assert!(!r.calabi_yau.holds);
        assert!(r.toric.is_none());
        assert!(r.ambient.is_none());
        assert!(r.quotients.is_none());
        assert!(r.calabi_yau.diagnostic.is_some());
    }

    #[test]
    fn report_json_is_deterministic() {
        let a = serde_json::to_string(&report_for("x0^4*x1+x1^5+x2^5+x3^5+x4^5")).unwrap();
        let b = serde_json::to_string(&report_for("x0^4*x1+x1^5+x2^5+x3^5+x4^5")).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pipeline_rejects_foreign_group() {
        let p = parse_polynomial("x0^5+x1^5+x2^5+x3^5+x4^5").unwrap();
        let bad = crate::symmetry::DiagonalGroup::from_generators(
            5,
            vec![PhaseVector::new(vec![
                num_rational::BigRational::new(1.into(), 7.into()),
                num_rational::BigRational::from_integer(0.into()),
                num_rational::BigRational::from_integer(0.into()),
                num_rational::BigRational::from_integer(0.into()),
                num_rational::BigRational::from_integer(0.into()),
            ])],
        );
        assert!(mirror_pipeline(&p, &bad).is_err());
    }
}
