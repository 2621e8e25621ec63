//! Acceptance gate: one criterion per test, one pass/fail line each.
//!
//! Criteria (all exact, with wall-clock budgets):
//! 1. Fermat quintic with G = <j>: dual group (5,5,5,5), ambient weights
//!    (1,1,1,1,1) with quotient (5,5,5), transpose = Fermat quintic. < 1 s.
//! 2. Chain quintic with G = <j>: transpose weights (64,48,52,51,41) of
//!    degree 256, dual group cyclic of order 256 generated by the transpose
//!    exponential element, trivial ambient quotient. < 1 s.
//! 3. Mixed quintic with G = <j>: transpose weights (5,3,4,4,4) of degree
//!    20, transpose exponential element (1/4,3/20,1/5,1/5,1/5), dual group
//!    equal to the span of {j, (0,0,1/5,4/5,0), (0,0,0,1/5,4/5)}, reduced
//!    dual group (5,5). < 1 s.
//! 4. All three pairwise comparisons of the quintics share a term-identical
//!    Laurent chart and pass 100/100 rational point probes. < 5 s.
//! 5. Corpus (<= 4 variables, degree <= 12, Calabi-Yau, groups of order
//!    <= 200): double dual returns the group, order product equals |det E|
//!    against a brute-force element count, SL membership matches the dual
//!    exponential element, pairing = E - 1, all rays primitive, ambient
//!    verification passes. Zero failures, < 60 s.
//! 6. Determinism: two full runs produce byte-identical JSON.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use bhk::mirror::{
    common_chart, generate_corpus, mirror_pipeline, rational_point_probe,
};
use bhk::poly::{
    exponent_matrix, parse_polynomial, transpose, weight_system, ExponentMatrix,
};
use bhk::symmetry::{
    aut_group, dual_group, exponential_element, is_special_linear, quotient_by_j, subgroup,
    DiagonalGroup,
};
use bhk::toric::{
    build_invariant_lattice, mu_points, nu_points, pairing_matrix, verify_mirror_ambient,
};

const FERMAT: &str = "x0^5+x1^5+x2^5+x3^5+x4^5";
const CHAIN: &str = "x0^4*x1+x1^4*x2+x2^4*x3+x3^4*x4+x4^5";
const MIXED: &str = "x0^4*x1+x1^5+x2^5+x3^5+x4^5";

fn matrix(text: &str) -> ExponentMatrix {
    exponent_matrix(&parse_polynomial(text).unwrap()).unwrap()
}

fn j_group(e: &ExponentMatrix) -> DiagonalGroup {
    let w = weight_system(e).unwrap();
    subgroup(vec![exponential_element(&w)], &aut_group(e)).unwrap()
}

fn gate(name: &str, budget: Duration, body: impl FnOnce()) {
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let timely = elapsed <= budget;
    let pass = outcome.is_ok() && timely;
    println!(
        "{}: {} ({:.2?} / budget {:.2?})",
        name,
        if pass { "PASS" } else { "FAIL" },
        elapsed,
        budget
    );
    if let Err(e) = outcome {
        std::panic::resume_unwind(e);
    }
    assert!(timely, "{name} exceeded its time budget: {elapsed:.2?}");
}

fn invariants_i64(inv: &bhk::latticealg::AbelianInvariants) -> Vec<i64> {
    inv.factors().iter().map(|x| x.to_i64().unwrap()).collect()
}

#[test]
fn criterion_1_fermat_quintic() {
    gate("criterion 1 (Fermat quintic)", Duration::from_secs(1), || {
        let e = matrix(FERMAT);
        let g = j_group(&e);
        let gt = dual_group(&e, &g);
        assert_eq!(invariants_i64(gt.invariants()), vec![5, 5, 5, 5]);

        let v = verify_mirror_ambient(&e, &g).unwrap();
        assert!(v.passed());
        let weights: Vec<i64> = v
            .report
            .relation_weights
            .iter()
            .map(|x| x.to_i64().unwrap())
            .collect();
        assert_eq!(weights, vec![1, 1, 1, 1, 1]);
        assert_eq!(invariants_i64(&v.report.quotient_invariants), vec![5, 5, 5]);

        // The transpose is again the Fermat quintic.
        assert_eq!(transpose(&e).matrix(), e.matrix());
    });
}

#[test]
fn criterion_2_chain_quintic() {
    gate("criterion 2 (chain quintic)", Duration::from_secs(1), || {
        let e = matrix(CHAIN);
        let g = j_group(&e);
        let wt = weight_system(&transpose(&e)).unwrap();
        let c: Vec<i64> = wt.weights().iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(c, vec![64, 48, 52, 51, 41]);
        assert_eq!(wt.degree().to_i64(), Some(256));

        let gt = dual_group(&e, &g);
        assert_eq!(gt.order().to_i64(), Some(256));
        assert_eq!(invariants_i64(gt.invariants()), vec![256]);
        let jt = exponential_element(&wt);
        let jt_span = DiagonalGroup::from_generators(5, vec![jt]);
        assert_eq!(gt, jt_span);

        let v = verify_mirror_ambient(&e, &g).unwrap();
        assert!(v.passed());
        assert!(v.report.quotient_invariants.is_trivial());
    });
}

#[test]
fn criterion_3_mixed_quintic() {
    gate("criterion 3 (mixed quintic)", Duration::from_secs(1), || {
        let e = matrix(MIXED);
        let g = j_group(&e);
        let wt = weight_system(&transpose(&e)).unwrap();
        let c: Vec<i64> = wt.weights().iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(c, vec![5, 3, 4, 4, 4]);
        assert_eq!(wt.degree().to_i64(), Some(20));

        let jt = exponential_element(&wt);
        let jt_str: Vec<String> = jt.phases().iter().map(|x| x.to_string()).collect();
        assert_eq!(jt_str, vec!["1/4", "3/20", "1/5", "1/5", "1/5"]);

        let gt = dual_group(&e, &g);
        let q = |n: i64, d: i64| num_rational::BigRational::new(n.into(), d.into());
        let g1 = bhk::symmetry::PhaseVector::new(vec![
            q(0, 1),
            q(0, 1),
            q(1, 5),
            q(4, 5),
            q(0, 1),
        ]);
        let g2 = bhk::symmetry::PhaseVector::new(vec![
            q(0, 1),
            q(0, 1),
            q(0, 1),
            q(1, 5),
            q(4, 5),
        ]);
        let presented = DiagonalGroup::from_generators(5, vec![jt.clone(), g1, g2]);
        assert_eq!(gt, presented);

        let gt_tilde = quotient_by_j(&gt, &jt).unwrap();
        assert_eq!(invariants_i64(&gt_tilde.invariants), vec![5, 5]);
    });
}

#[test]
fn criterion_4_multiple_mirrors() {
    gate(
        "criterion 4 (pairwise shared charts + probes)",
        Duration::from_secs(5),
        || {
            let es = [matrix(FERMAT), matrix(CHAIN), matrix(MIXED)];
            let g = j_group(&es[0]);
            for a in 0..3 {
                for b in a + 1..3 {
                    let atlas = common_chart(&es[a], &es[b], &g).unwrap();
                    assert_eq!(atlas.shared_chart.terms().len(), 5);
                    assert_eq!(atlas.shared_chart.num_vars(), 4);
                    let record = rational_point_probe(&atlas, 100, 20260823).unwrap();
                    assert_eq!(record.passes, 100, "pair ({a},{b})");
                }
            }
        },
    );
}

#[test]
fn criterion_5_corpus_property_suite() {
    gate(
        "criterion 5 (corpus property suite)",
        Duration::from_secs(60),
        || {
            let corpus = generate_corpus(4, 12, 200);
            assert!(!corpus.is_empty());
            let mut pairs = 0usize;
            for entry in &corpus {
                let e = entry.matrix();
                let det = e.det();
                let w = weight_system(&e).unwrap();
                let wt = weight_system(&transpose(&e)).unwrap();
                let jt = exponential_element(&wt);
                for gi in 0..entry.groups.len() {
                    let g = entry.group(gi);
                    pairs += 1;

                    // (a) double dual.
                    let gt = dual_group(&e, &g);
                    let gtt = dual_group(&transpose(&e), &gt);
                    assert_eq!(gtt, g, "double dual mismatch");

                    // (b) order product, with brute-force counts as oracle.
                    assert_eq!(
                        g.order() * gt.order(),
                        det.clone().max(-det.clone()),
                        "order product mismatch"
                    );
                    let g_count = g.enumerate_elements(100_000).unwrap().len();
                    assert_eq!(BigInt::from(g_count), *g.order());
                    if *gt.order() <= BigInt::from(4000) {
                        let gt_count = gt.enumerate_elements(100_000).unwrap().len();
                        assert_eq!(BigInt::from(gt_count), *gt.order());
                    }

                    // (c) SL membership vs dual exponential element.
                    assert_eq!(is_special_linear(&g), gt.contains(&jt));

                    // (d) + (e) pairing matrix and primitivity.
                    let m = build_invariant_lattice(&w, &g);
                    let nus = nu_points(&m).unwrap();
                    let mus = mu_points(&e, &m).unwrap();
                    let pm = pairing_matrix(&mus, &nus);
                    for i in 0..e.size() {
                        for j in 0..e.size() {
                            assert_eq!(
                                pm.at(i, j) + BigInt::from(1),
                                *e.matrix().at(i, j)
                            );
                        }
                    }

                    // (f) full ambient verification.
                    let v = verify_mirror_ambient(&e, &g).unwrap();
                    assert!(v.passed(), "ambient verification failed: {:?}", v.clauses);
                }
                // (c) reverse direction on the full automorphism group, which
                // is usually not inside SL.
                let aut = aut_group(&e);
                let gt_aut = dual_group(&e, &aut);
                assert_eq!(is_special_linear(&aut), gt_aut.contains(&jt));
            }
            println!(
                "  corpus: {} polynomials, {} (W,G) pairs checked",
                corpus.len(),
                pairs
            );
        },
    );
}

#[test]
fn criterion_6_determinism() {
    gate("criterion 6 (determinism)", Duration::from_secs(60), || {
        let run = || {
            let mut blob = String::new();
            for text in [FERMAT, CHAIN, MIXED] {
                let p = parse_polynomial(text).unwrap();
                let e = exponent_matrix(&p).unwrap();
                let g = j_group(&e);
                let report = mirror_pipeline(&p, &g).unwrap();
                blob.push_str(&serde_json::to_string(&report).unwrap());
                blob.push('\n');
            }
            for entry in generate_corpus(4, 12, 200) {
                blob.push_str(&serde_json::to_string(&entry).unwrap());
                blob.push('\n');
            }
            let es = [matrix(FERMAT), matrix(CHAIN), matrix(MIXED)];
            let g = j_group(&es[0]);
            let atlas = common_chart(&es[0], &es[1], &g).unwrap();
            let probe = rational_point_probe(&atlas, 25, 7).unwrap();
            blob.push_str(&format!("{probe:?}\n"));
            blob
        };
        let first = run();
        let second = run();
        assert_eq!(first.as_bytes(), second.as_bytes());
    });
}
