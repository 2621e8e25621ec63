//! Enumeration: all invertible polynomials realizing a weight system, all
//! Calabi-Yau-type subgroups of a given polynomial, and the small-parameter
//! corpus used by the property suite.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::poly::{
    atom_decomposition, exponent_matrix, is_calabi_yau, weight_system, ExponentMatrix,
    Polynomial, WeightSystem,
};
use crate::symmetry::{
    aut_group, exponential_element, sl_intersection, subgroup, DiagonalGroup, PhaseVector,
};

/// All invertible nondegenerate exponent matrices with the given weight
/// system, up to simultaneous relabeling of variables (and the induced
/// relabeling of monomials). Deterministic canonical order.
///
/// The search is exact: in an atom decomposition every monomial is
/// `x_i^a` or `x_i^a x_k`, and each variable heads exactly one monomial, so
/// after relabeling monomials the matrix has head exponents on the diagonal
/// and at most a single off-diagonal 1 per row, with the row degree fixed by
/// the weights.
pub fn enumerate_invertible(w: &WeightSystem) -> Vec<ExponentMatrix> {
    let n1 = w.num_vars();
    let c: Vec<BigInt> = w.weights().to_vec();
    let d = w.degree().clone();
    // Row choices for each head variable i: (head exponent, optional tail).
    let mut choices: Vec<Vec<(BigInt, Option<usize>)>> = Vec::with_capacity(n1);
    for i in 0..n1 {
        let mut rows = Vec::new();
        // Pure power: a * c_i = d with a >= 2.
        let (q, r) = d.div_rem(&c[i]);
        if r.is_zero() && q >= BigInt::from(2) {
            rows.push((q.clone(), None));
        }
        // Link: a * c_i + c_k = d with a >= 1.
        for k in 0..n1 {
            if k == i {
                continue;
            }
            let rem = &d - &c[k];
            let (q, r) = rem.div_rem(&c[i]);
            if r.is_zero() && q >= BigInt::one() {
                rows.push((q, Some(k)));
            }
        }
        choices.push(rows);
    }

    let mut found: Vec<Vec<Vec<u64>>> = Vec::new();
    let mut picks = vec![0usize; n1];
    enumerate_rows(w, &choices, &mut picks, 0, &mut found);
    found.sort();
    found.dedup();
    found
        .into_iter()
        .map(|rows| {
            let p = Polynomial::new(rows).expect("validated during search");
            exponent_matrix(&p).expect("validated during search")
        })
        .collect()
}

fn enumerate_rows(
    w: &WeightSystem,
    choices: &[Vec<(BigInt, Option<usize>)>],
    picks: &mut Vec<usize>,
    i: usize,
    found: &mut Vec<Vec<Vec<u64>>>,
) {
    let n1 = choices.len();
    if i == n1 {
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n1);
        for (head, pick) in picks.iter().enumerate() {
            let (a, tail) = &choices[head][*pick];
            let mut row = vec![0u64; n1];
            row[head] = a.to_u64().expect("exponent fits");
            if let Some(k) = tail {
                row[*k] += 1;
            }
            rows.push(row);
        }
        let Ok(p) = Polynomial::new(rows) else { return };
        let Ok(e) = exponent_matrix(&p) else { return };
        if atom_decomposition(&e).is_err() {
            return;
        }
        let Ok(we) = weight_system(&e) else { return };
        if we.weights() != w.weights() || we.degree() != w.degree() {
            return;
        }
        found.push(canonical_form(p.canonical_monomials(), w));
        return;
    }
    for pick in 0..choices[i].len() {
        picks[i] = pick;
        enumerate_rows(w, choices, picks, i + 1, found);
    }
}

/// Minimal representative of the orbit of `rows` under simultaneous
/// variable/monomial relabeling by weight-preserving permutations.
fn canonical_form(rows: Vec<Vec<u64>>, w: &WeightSystem) -> Vec<Vec<u64>> {
    let n1 = rows.len();
    let mut best: Option<Vec<Vec<u64>>> = None;
    let mut perm: Vec<usize> = (0..n1).collect();
    permute_all(&mut perm, 0, &mut |p| {
        if !(0..n1).all(|i| w.weights()[p[i]] == w.weights()[i]) {
            return;
        }
        // Variable relabeling i -> p[i] maps the monomial headed by x_{p[i]}
        // to one headed by x_i, so conjugating keeps heads on the diagonal.
        let mut image: Vec<Vec<u64>> = (0..n1)
            .map(|i| (0..n1).map(|j| rows[p[i]][p[j]]).collect())
            .collect();
        image.sort();
        if best.as_ref().map_or(true, |b| image < *b) {
            best = Some(image);
        }
    });
    best.expect("identity permutation always applies")
}

fn permute_all(perm: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    let n = perm.len();
    if k == n {
        visit(perm);
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        permute_all(perm, k + 1, visit);
        perm.swap(k, i);
    }
}

/// All Calabi-Yau-type groups for `e`: subgroups `G` with
/// `<j_W> <= G <= SL cap Aut(W)` and `|G| <= cap`, in deterministic order.
pub fn cy_subgroups(e: &ExponentMatrix, cap: u64) -> Vec<DiagonalGroup> {
    let w = weight_system(e).expect("positive weights");
    if !is_calabi_yau(&w) {
        return Vec::new();
    }
    let aut = aut_group(e);
    let j = exponential_element(&w);
    let top = sl_intersection(&aut);
    // Structure of Q = (SL cap Aut) / <j> with aligned generators.
    let (invariants, gens) =
        crate::symmetry::quotient_structure(top.num_vars(), top.generators(), &[j.clone()]);
    let k = invariants.factors().len();
    let d: Vec<BigInt> = invariants.factors().to_vec();

    // Subgroups of Q = prod Z/d_i correspond to lattices L with
    // D Z^k <= L <= Z^k, enumerated by their unique column-HNF bases: upper
    // triangular, pivot h_jj | d_j, entries right of a pivot reduced mod it.
    let mut groups: Vec<DiagonalGroup> = Vec::new();
    let mut seen: Vec<crate::latticealg::LatticeBasis> = Vec::new();
    let mut h = vec![vec![BigInt::zero(); k]; k];
    enumerate_hnf(&d, &mut h, 0, &mut |h| {
        // Require D Z^k <= L: every d_j e_j must have integer coordinates.
        if !contains_diagonal(h, &d) {
            return;
        }
        let mut g_gens = vec![j.clone()];
        for col in 0..k {
            let mut x = PhaseVector::zero(j.len());
            for (row, gen) in gens.iter().enumerate() {
                x = x.add(&gen.scale(&h[row][col]));
            }
            g_gens.push(x);
        }
        let g = subgroup(g_gens, &top).expect("generators lie in SL cap Aut");
        if *g.order() > BigInt::from(cap) {
            return;
        }
        if !seen.contains(g.membership_lattice()) {
            seen.push(g.membership_lattice().clone());
            groups.push(g);
        }
    });
    groups.sort_by_key(|g| {
        (
            g.order().clone(),
            g.membership_lattice().matrix().clone().transpose().row(0),
            format!("{:?}", g.membership_lattice().matrix()),
        )
    });
    groups
}

fn enumerate_hnf(
    d: &[BigInt],
    h: &mut Vec<Vec<BigInt>>,
    col: usize,
    visit: &mut impl FnMut(&Vec<Vec<BigInt>>),
) {
    let k = d.len();
    if col == k {
        visit(h);
        return;
    }
    let mut piv = BigInt::one();
    while &piv <= &d[col] {
        if (&d[col] % &piv).is_zero() {
            h[col][col] = piv.clone();
            // Entries above the pivot in this column, each reduced modulo the
            // pivot of its own row.
            fill_above(d, h, col, 0, visit);
        }
        piv += BigInt::one();
    }
    h[col][col] = BigInt::zero();
}

fn fill_above(
    d: &[BigInt],
    h: &mut Vec<Vec<BigInt>>,
    col: usize,
    row: usize,
    visit: &mut impl FnMut(&Vec<Vec<BigInt>>),
) {
    if row == col {
        enumerate_hnf(d, h, col + 1, visit);
        return;
    }
    let bound = h[row][row].clone();
    let mut v = BigInt::zero();
    while &v < &bound {
        h[row][col] = v.clone();
        fill_above(d, h, col, row + 1, visit);
        v += BigInt::one();
    }
    h[row][col] = BigInt::zero();
}

fn contains_diagonal(h: &[Vec<BigInt>], d: &[BigInt]) -> bool {
    // Back-substitution: coordinates of d_j e_j in the upper triangular
    // basis must be integral.
    let k = d.len();
    for j in 0..k {
        let mut target: Vec<BigRational> = (0..k)
            .map(|r| {
                if r == j {
                    BigRational::from_integer(d[j].clone())
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        for col in (0..k).rev() {
            let coeff = &target[col] / BigRational::from_integer(h[col][col].clone());
            if !coeff.is_integer() {
                return false;
            }
            for row in 0..col {
                let sub = &coeff * BigRational::from_integer(h[row][col].clone());
                target[row] -= sub;
            }
        }
    }
    true
}

/// One corpus item: an invertible polynomial plus its admissible groups.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub exponent_matrix: Vec<Vec<u64>>,
    pub weights: Vec<String>,
    pub degree: String,
    /// Each group as a list of generator strings `"a/b,c/d,..."`.
    pub groups: Vec<Vec<String>>,
}

impl CorpusEntry {
    pub fn matrix(&self) -> ExponentMatrix {
        let p = Polynomial::new(self.exponent_matrix.clone()).expect("valid corpus entry");
        exponent_matrix(&p).expect("valid corpus entry")
    }

    pub fn group(&self, idx: usize) -> DiagonalGroup {
        let gens: Vec<PhaseVector> = self.groups[idx]
            .iter()
            .map(|s| {
                PhaseVector::new(
                    s.split(',')
                        .map(|t| t.trim().parse::<BigRational>().expect("valid rational"))
                        .collect(),
                )
            })
            .collect();
        DiagonalGroup::from_generators(self.exponent_matrix.len(), gens)
    }
}

fn phase_string(p: &PhaseVector) -> String {
    p.phases()
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// All Calabi-Yau weight systems with at most `max_vars` variables and degree
/// at most `max_degree` (weights ascending, gcd 1), each with every invertible
/// polynomial realizing it whose transpose is also nondegenerate, and every
/// admissible group of order at most `group_cap`.
pub fn generate_corpus(max_vars: usize, max_degree: u64, group_cap: u64) -> Vec<CorpusEntry> {
    let mut entries = Vec::new();
    for n1 in 2..=max_vars {
        for d in 2..=max_degree {
            for c in ascending_compositions(d, n1) {
                let g = c.iter().fold(0u64, |acc, &x| acc.gcd(&x));
                if g != 1 {
                    continue;
                }
                let w = WeightSystem::from_weights(
                    c.iter().map(|&x| BigInt::from(x)).collect(),
                    BigInt::from(d),
                );
                for e in enumerate_invertible(&w) {
                    // Both sides must be usable: the transpose needs an atom
                    // decomposition too for the mirror construction.
                    let et = crate::poly::transpose(&e);
                    if atom_decomposition(&et).is_err() || weight_system(&et).is_err() {
                        continue;
                    }
                    let groups = cy_subgroups(&e, group_cap);
                    if groups.is_empty() {
                        continue;
                    }
                    let mono: Vec<Vec<u64>> = (0..n1)
                        .map(|r| {
                            (0..n1)
                                .map(|cc| e.matrix().at(r, cc).to_u64().unwrap())
                                .collect()
                        })
                        .collect();
                    entries.push(CorpusEntry {
                        exponent_matrix: mono,
                        weights: c.iter().map(|x| x.to_string()).collect(),
                        degree: d.to_string(),
                        groups: groups
                            .iter()
                            .map(|g| g.generators().iter().map(phase_string).collect())
                            .collect(),
                    });
                }
            }
        }
    }
    entries
}

/// Weight vectors `c_1 <= ... <= c_k >= 1` with sum `d` (Calabi-Yau).
fn ascending_compositions(d: u64, k: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(d: u64, k: usize, min: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if k == 0 {
            if d == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut c = min;
        while c * (k as u64) <= d {
            cur.push(c);
            rec(d - c, k - 1, c, cur, out);
            cur.pop();
            c += 1;
        }
    }
    rec(d, k, 1, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn ws(c: &[i64], d: i64) -> WeightSystem {
        WeightSystem::from_weights(c.iter().map(|&x| BigInt::from(x)).collect(), BigInt::from(d))
    }

    #[test]
    fn quintic_weight_system_contains_the_three_examples() {
        let list = enumerate_invertible(&ws(&[1, 1, 1, 1, 1], 5));
        let has = |text: &str| {
            let e = exponent_matrix(&parse_polynomial(text).unwrap()).unwrap();
            let canon = canonical_form(
                Polynomial::from_exponent_matrix(&e).canonical_monomials(),
                &ws(&[1, 1, 1, 1, 1], 5),
            );
            list.iter().any(|x| {
                canonical_form(
                    Polynomial::from_exponent_matrix(x).canonical_monomials(),
                    &ws(&[1, 1, 1, 1, 1], 5),
                ) == canon
            })
        };
        assert!(has("x0^5+x1^5+x2^5+x3^5+x4^5"));
        assert!(has("x0^4*x1+x1^4*x2+x2^4*x3+x3^4*x4+x4^5"));
        assert!(has("x0^4*x1+x1^5+x2^5+x3^5+x4^5"));
    }

    #[test]
    fn two_variable_cubic() {
        let list = enumerate_invertible(&ws(&[1, 1], 3));
        // Fermat x^3 + y^3, the loop x^2 y + y^2 x, and the chain
        // x^3 + x y^2.
        assert_eq!(list.len(), 3);
    }

    #[test]
    fn weights_two_one_degree_four() {
        let list = enumerate_invertible(&ws(&[2, 1], 4));
        // x^2 + y^4 and x^2 + x y^2 (chain, transposed orientation),
        // plus x^2 y^0... oracle below pins the exact count.
        assert!(!list.is_empty());
        for e in &list {
            let w = weight_system(e).unwrap();
            assert_eq!(w, ws(&[2, 1], 4));
        }
    }

    #[test]
    fn enumeration_matches_brute_force_oracle() {
        // Oracle: all row combinations with entries <= d satisfying the
        // weight equations, filtered by nonsingularity and atom
        // decomposition, deduplicated by the same canonicalization.
        for (c, d) in [
            (vec![1i64, 1], 2i64),
            (vec![1, 1], 3),
            (vec![1, 1], 4),
            (vec![1, 1], 6),
            (vec![1, 1], 12),
            (vec![2, 1], 4),
            (vec![2, 1], 6),
            (vec![3, 2], 12),
            (vec![1, 1, 1], 3),
            (vec![1, 1, 1], 4),
            (vec![1, 2, 3], 6),
            (vec![1, 1, 2], 4),
            (vec![1, 2, 2], 5),
            (vec![1, 1, 1], 6),
        ] {
            let w = ws(&c, d);
            let fast = enumerate_invertible(&w);
            let slow = brute_force(&w);
            assert_eq!(
                fast.len(),
                slow.len(),
                "count mismatch for c={c:?} d={d}: fast {} vs oracle {}",
                fast.len(),
                slow.len()
            );
        }
    }

    fn brute_force(w: &WeightSystem) -> Vec<Vec<Vec<u64>>> {
        let n1 = w.num_vars();
        let d = w.degree().to_u64().unwrap();
        let c: Vec<u64> = w.weights().iter().map(|x| x.to_u64().unwrap()).collect();
        // All rows with entries <= d and correct weighted degree.
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut cur = vec![0u64; n1];
        fn rec(
            j: usize,
            rem: u64,
            c: &[u64],
            d: u64,
            cur: &mut Vec<u64>,
            rows: &mut Vec<Vec<u64>>,
        ) {
            if j == c.len() {
                if rem == 0 {
                    rows.push(cur.clone());
                }
                return;
            }
            let mut e = 0u64;
            while e * c[j] <= rem && e <= d {
                cur[j] = e;
                rec(j + 1, rem - e * c[j], c, d, cur, rows);
                e += 1;
            }
            cur[j] = 0;
        }
        rec(0, d, &c, d, &mut cur, &mut rows);
        let mut found: Vec<Vec<Vec<u64>>> = Vec::new();
        let mut pick = vec![0usize; n1];
        fn combos(
            i: usize,
            rows: &[Vec<u64>],
            pick: &mut Vec<usize>,
            w: &WeightSystem,
            found: &mut Vec<Vec<Vec<u64>>>,
        ) {
            let n1 = pick.len();
            if i == n1 {
                let mono: Vec<Vec<u64>> = pick.iter().map(|&p| rows[p].clone()).collect();
                let Ok(p) = Polynomial::new(mono) else { return };
                let Ok(e) = exponent_matrix(&p) else { return };
                if atom_decomposition(&e).is_err() {
                    return;
                }
                let Ok(we) = weight_system(&e) else { return };
                if we != *w {
                    return;
                }
                found.push(canonical_form(p.canonical_monomials(), w));
                return;
            }
            // Monomial order is irrelevant; enforce nondecreasing picks.
            let start = if i == 0 { 0 } else { pick[i - 1] };
            for p in start..rows.len() {
                pick[i] = p;
                combos(i + 1, rows, pick, w, found);
            }
        }
        combos(0, &rows, &mut pick, w, &mut found);
        found.sort();
        found.dedup();
        found
    }

    #[test]
    fn cy_subgroups_of_fermat_quintic() {
        let e = exponent_matrix(&parse_polynomial("x0^5+x1^5+x2^5+x3^5+x4^5").unwrap()).unwrap();
        let groups = cy_subgroups(&e, 200);
        // <j> (order 5) is always present; the full SL cap Aut has order 625
        // and is excluded by the cap.
        assert!(groups.iter().any(|g| g.order() == &BigInt::from(5)));
        assert!(groups.iter().all(|g| g.order() <= &BigInt::from(200)));
        let w = weight_system(&e).unwrap();
        let j = exponential_element(&w);
        for g in &groups {
            assert!(g.contains(&j));
            assert!(crate::symmetry::is_special_linear(g));
        }
        // With a big enough cap the count includes the top group.
        let all = cy_subgroups(&e, 1000);
        assert!(all.iter().any(|g| g.order() == &BigInt::from(625)));
        assert!(all.len() > groups.len());
    }

    #[test]
    fn cy_subgroups_of_chain_quintic() {
        let e = exponent_matrix(
            &parse_polynomial("x0^4*x1+x1^4*x2+x2^4*x3+x3^4*x4+x4^5").unwrap(),
        )
        .unwrap();
        let groups = cy_subgroups(&e, 200);
        // SL cap Aut = <j> here (Example 2's dual side is trivial).
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].order(), &BigInt::from(5));
    }

    #[test]
    fn cy_subgroups_brute_force_oracle() {
        // Oracle: enumerate all elements of SL cap Aut and form all subgroups
        // generated by j plus one extra element; every such group must appear
        // in the enumerated list.
        let e = exponent_matrix(&parse_polynomial("x0^5+x1^5+x2^5+x3^5+x4^5").unwrap()).unwrap();
        let all = cy_subgroups(&e, 1000);
        let w = weight_system(&e).unwrap();
        let j = exponential_element(&w);
        let top = sl_intersection(&aut_group(&e));
        let elements = top.enumerate_elements(100_000).unwrap();
        for x in &elements {
            let g = subgroup(vec![j.clone(), x.clone()], &top).unwrap();
            assert!(
                all.iter().any(|h| h == &g),
                "missing subgroup generated by j and {x}"
            );
        }
    }

    #[test]
    fn corpus_is_nonempty_and_well_formed() {
        let corpus = generate_corpus(3, 6, 200);
        assert!(!corpus.is_empty());
        for entry in &corpus {
            let e = entry.matrix();
            assert!(atom_decomposition(&e).is_ok());
            for i in 0..entry.groups.len() {
                let g = entry.group(i);
                assert!(g.order() <= &BigInt::from(200));
            }
        }
        // The Calabi-Yau condition fixes the degree to the weight sum, so
        // the 2-variable entries have weights (1,1) and degree 2.
        assert!(corpus
            .iter()
            .any(|e| e.weights == vec!["1", "1"] && e.degree == "2"));
    }

    #[test]
    fn corpus_roundtrips_through_json_lines() {
        let corpus = generate_corpus(2, 6, 200);
        let lines: Vec<String> = corpus
            .iter()
            .map(|e| serde_json::to_string(e).unwrap())
            .collect();
        for (line, entry) in lines.iter().zip(&corpus) {
            let back: CorpusEntry = serde_json::from_str(line).unwrap();
            assert_eq!(back.exponent_matrix, entry.exponent_matrix);
            assert_eq!(back.groups, entry.groups);
        }
    }
}
