//! Invertible quasi-homogeneous polynomials: parsing, exponent matrices,
//! Fermat/chain/loop decomposition, weight systems and transposes.
//!
//! All coefficients are fixed to 1: for a nondegenerate invertible polynomial
//! any coefficients can be removed by rescaling the variables, so they carry
//! no information this toolkit cares about.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use thiserror::Error;

use crate::latticealg::{solve_rational, IntMat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("coefficients other than 1 are not supported")]
    CoefficientUnsupported,
    #[error("duplicate monomial")]
    DuplicateMonomial,
    #[error("zero (constant) monomial")]
    ZeroMonomial,
    #[error("exponent matrix is not square: {rows} monomials, {cols} variables")]
    NotSquare { rows: usize, cols: usize },
    #[error("exponent matrix is singular")]
    SingularExponentMatrix,
    #[error("variable x{0} does not appear in any monomial")]
    VariableAbsent(usize),
    #[error("monomial pattern does not decompose into Fermat/chain/loop atoms")]
    NotInvertibleNondegenerate,
    #[error("weight q_{0} is not positive; not a quasi-homogeneous potential")]
    NonpositiveWeight(usize),
}

/// A sum of distinct unit-coefficient monomials with as many monomials as
/// variables. Monomial order is as written.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    num_vars: usize,
    monomials: Vec<Vec<u64>>,
    /// Amount subtracted from the variable indices as written (e.g. 1 when
    /// the input used x1..x5).
    index_shift: u64,
}

impl Polynomial {
    pub fn new(monomials: Vec<Vec<u64>>) -> Result<Self, PolyError> {
        let num_vars = monomials.first().map_or(0, |m| m.len());
        Self::with_shift(num_vars, monomials, 0)
    }

    fn with_shift(
        num_vars: usize,
        monomials: Vec<Vec<u64>>,
        index_shift: u64,
    ) -> Result<Self, PolyError> {
        for m in &monomials {
            if m.len() != num_vars {
                return Err(PolyError::NotSquare {
                    rows: monomials.len(),
                    cols: num_vars,
                });
            }
            if m.iter().all(|&e| e == 0) {
                return Err(PolyError::ZeroMonomial);
            }
        }
        for i in 0..monomials.len() {
            for j in i + 1..monomials.len() {
                if monomials[i] == monomials[j] {
                    return Err(PolyError::DuplicateMonomial);
                }
            }
        }
        Ok(Polynomial {
            num_vars,
            monomials,
            index_shift,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn monomials(&self) -> &[Vec<u64>] {
        &self.monomials
    }

    pub fn index_shift(&self) -> u64 {
        self.index_shift
    }

    /// Monomials sorted lexicographically on exponent vectors; used by
    /// reports so outputs are comparable across input orderings.
    pub fn canonical_monomials(&self) -> Vec<Vec<u64>> {
        let mut m = self.monomials.clone();
        m.sort();
        m
    }

    /// Rebuilds the defining polynomial of an exponent matrix (rows become
    /// monomials).
    pub fn from_exponent_matrix(e: &ExponentMatrix) -> Self {
        let monomials: Vec<Vec<u64>> = (0..e.matrix().rows())
            .map(|r| {
                e.matrix()
                    .row(r)
                    .iter()
                    .map(|x| x.to_u64().expect("exponent fits in u64"))
                    .collect()
            })
            .collect();
        Polynomial {
            num_vars: e.matrix().cols(),
            monomials,
            index_shift: 0,
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .monomials
            .iter()
            .map(|m| {
                let factors: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(j, &e)| {
                        if e == 1 {
                            format!("x{j}")
                        } else {
                            format!("x{j}^{e}")
                        }
                    })
                    .collect();
                factors.join("*")
            })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

/// Grammar: poly ::= term ('+' term)*; term ::= factor ('*' factor)*;
/// factor ::= var ('^' posint)?; var ::= ('x'|'X') nonnegint.
/// Whitespace is ignored. Any contiguous variable index range is accepted
/// and shifted to 0-based.
pub fn parse_polynomial(text: &str) -> Result<Polynomial, PolyError> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(PolyError::Syntax("empty input".into()));
    }
    let mut raw_terms: Vec<Vec<(u64, u64)>> = Vec::new(); // (var index, exponent)
    for term in cleaned.split('+') {
        if term.is_empty() {
            return Err(PolyError::Syntax("empty term".into()));
        }
        let mut factors: Vec<(u64, u64)> = Vec::new();
        for factor in term.split('*') {
            factors.push(parse_factor(factor)?);
        }
        raw_terms.push(factors);
    }
    let min_idx = raw_terms
        .iter()
        .flatten()
        .map(|&(v, _)| v)
        .min()
        .ok_or_else(|| PolyError::Syntax("no variables".into()))?;
    let max_idx = raw_terms.iter().flatten().map(|&(v, _)| v).max().unwrap();
    let num_vars = (max_idx - min_idx + 1) as usize;
    let mut monomials: Vec<Vec<u64>> = Vec::new();
    for term in raw_terms {
        let mut exps = vec![0u64; num_vars];
        for (v, e) in term {
            exps[(v - min_idx) as usize] += e;
        }
        monomials.push(exps);
    }
    Polynomial::with_shift(num_vars, monomials, min_idx)
}

fn parse_factor(s: &str) -> Result<(u64, u64), PolyError> {
    let mut chars = s.chars();
    match chars.next() {
        Some('x') | Some('X') => {}
        Some(c) if c.is_ascii_digit() => return Err(PolyError::CoefficientUnsupported),
        _ => return Err(PolyError::Syntax(format!("bad factor {s:?}"))),
    }
    let rest: &str = chars.as_str();
    let (idx_str, exp_str) = match rest.split_once('^') {
        Some((i, e)) => (i, Some(e)),
        None => (rest, None),
    };
    let idx: u64 = idx_str
        .parse()
        .map_err(|_| PolyError::Syntax(format!("bad variable index in {s:?}")))?;
    let exp: u64 = match exp_str {
        Some(e) => {
            let v: u64 = e
                .parse()
                .map_err(|_| PolyError::Syntax(format!("bad exponent in {s:?}")))?;
            if v == 0 {
                return Err(PolyError::Syntax("exponent must be positive".into()));
            }
            v
        }
        None => 1,
    };
    Ok((idx, exp))
}

/// Square nonsingular matrix of monomial exponents, row i = monomial i.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExponentMatrix {
    mat: IntMat,
}

impl ExponentMatrix {
    pub fn from_matrix(mat: IntMat) -> Result<Self, PolyError> {
        if mat.rows() != mat.cols() {
            return Err(PolyError::NotSquare {
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        for c in 0..mat.cols() {
            if (0..mat.rows()).all(|r| mat.at(r, c).is_zero()) {
                return Err(PolyError::VariableAbsent(c));
            }
        }
        if mat.det().is_zero() {
            return Err(PolyError::SingularExponentMatrix);
        }
        Ok(ExponentMatrix { mat })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, PolyError> {
        Self::from_matrix(IntMat::from_i64_rows(rows))
    }

    pub fn matrix(&self) -> &IntMat {
        &self.mat
    }

    pub fn size(&self) -> usize {
        self.mat.rows()
    }

    pub fn det(&self) -> BigInt {
        self.mat.det()
    }
}

pub fn exponent_matrix(p: &Polynomial) -> Result<ExponentMatrix, PolyError> {
    if p.monomials().len() != p.num_vars() {
        return Err(PolyError::NotSquare {
            rows: p.monomials().len(),
            cols: p.num_vars(),
        });
    }
    let rows: Vec<Vec<BigInt>> = p
        .monomials()
        .iter()
        .map(|m| m.iter().map(|&e| BigInt::from(e)).collect())
        .collect();
    ExponentMatrix::from_matrix(IntMat::from_rows(&rows))
}

/// Transposing the exponent matrix gives the mirror polynomial.
pub fn transpose(e: &ExponentMatrix) -> ExponentMatrix {
    // The transpose keeps nonsingularity and nonzero columns (= nonzero
    // monomials of the original), so the invariants cannot fail.
    ExponentMatrix {
        mat: e.matrix().transpose(),
    }
}

/// Integer weights `c` with degree `d` and fractional weights `q = c/d`
/// satisfying `E q = 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightSystem {
    c: Vec<BigInt>,
    d: BigInt,
    q: Vec<BigRational>,
}

impl WeightSystem {
    /// Direct construction from integer weights and degree; used by the
    /// enumeration machinery. `q` is derived.
    pub fn from_weights(c: Vec<BigInt>, d: BigInt) -> Self {
        assert!(d.is_positive());
        assert!(c.iter().all(|x| x.is_positive()));
        let q = c
            .iter()
            .map(|ci| BigRational::new(ci.clone(), d.clone()))
            .collect();
        WeightSystem { c, d, q }
    }

    pub fn weights(&self) -> &[BigInt] {
        &self.c
    }

    pub fn degree(&self) -> &BigInt {
        &self.d
    }

    pub fn fractional(&self) -> &[BigRational] {
        &self.q
    }

    pub fn num_vars(&self) -> usize {
        self.c.len()
    }
}

/// Solves `E q = 1` exactly and normalizes to integer weights with
/// `gcd(c_0, ..., c_n, d) = 1`.
pub fn weight_system(e: &ExponentMatrix) -> Result<WeightSystem, PolyError> {
    let n = e.size();
    let ones = vec![BigRational::one(); n];
    let q = solve_rational(&e.matrix().to_rational(), &ones)
        .map_err(|_| PolyError::SingularExponentMatrix)?;
    for (i, qi) in q.iter().enumerate() {
        if !qi.is_positive() {
            return Err(PolyError::NonpositiveWeight(i));
        }
    }
    let mut dbar = BigInt::one();
    for qi in &q {
        dbar = num_integer::lcm(dbar, qi.denom().clone());
    }
    let mut c: Vec<BigInt> = q
        .iter()
        .map(|qi| (qi * BigRational::from_integer(dbar.clone())).to_integer())
        .collect();
    let mut d = dbar;
    // Paper convention gcd(c) = 1 is restored here, never reported as an
    // error. Dividing by gcd(c, d) keeps q = c/d and d integral.
    let mut g = d.clone();
    for ci in &c {
        g = num_integer::gcd(g, ci.clone());
    }
    if g > BigInt::one() {
        for ci in &mut c {
            *ci /= &g;
        }
        d /= &g;
    }
    Ok(WeightSystem::from_weights(c, d))
}

/// Calabi-Yau condition: the weights sum to the degree.
pub fn is_calabi_yau(w: &WeightSystem) -> bool {
    w.weights().iter().sum::<BigInt>() == *w.degree()
}

/// One Fermat, chain, or loop summand. `vars` are listed in chain/loop order:
/// the atom's monomials are `x_{v_t}^{a_t} x_{v_{t+1}}` (and `x_{v_k}^{a_k}`
/// for the chain end, `x_{v_k}^{a_k} x_{v_1}` closing the loop).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Atom {
    Fermat { var: usize, exponent: u64 },
    Chain { vars: Vec<usize>, exponents: Vec<u64> },
    Loop { vars: Vec<usize>, exponents: Vec<u64> },
}

impl Atom {
    pub fn min_var(&self) -> usize {
        match self {
            Atom::Fermat { var, .. } => *var,
            Atom::Chain { vars, .. } | Atom::Loop { vars, .. } => {
                *vars.iter().min().unwrap()
            }
        }
    }

    /// The monomials this atom contributes, as exponent vectors.
    pub fn monomials(&self, num_vars: usize) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        match self {
            Atom::Fermat { var, exponent } => {
                let mut m = vec![0; num_vars];
                m[*var] = *exponent;
                out.push(m);
            }
            Atom::Chain { vars, exponents } => {
                for t in 0..vars.len() {
                    let mut m = vec![0; num_vars];
                    m[vars[t]] = exponents[t];
                    if t + 1 < vars.len() {
                        m[vars[t + 1]] += 1;
                    }
                    out.push(m);
                }
            }
            Atom::Loop { vars, exponents } => {
                for t in 0..vars.len() {
                    let mut m = vec![0; num_vars];
                    m[vars[t]] = exponents[t];
                    m[vars[(t + 1) % vars.len()]] += 1;
                    out.push(m);
                }
            }
        }
        out
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AtomDecomposition {
    pub atoms: Vec<Atom>,
}

impl AtomDecomposition {
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .atoms
            .iter()
            .map(|a| match a {
                Atom::Fermat { var, exponent } => format!("fermat(x{var}^{exponent})"),
                Atom::Chain { vars, exponents } => format!(
                    "chain({})",
                    vars.iter()
                        .zip(exponents)
                        .map(|(v, e)| format!("x{v}^{e}"))
                        .collect::<Vec<_>>()
                        .join("->")
                ),
                Atom::Loop { vars, exponents } => format!(
                    "loop({})",
                    vars.iter()
                        .zip(exponents)
                        .map(|(v, e)| format!("x{v}^{e}"))
                        .collect::<Vec<_>>()
                        .join("->")
                ),
            })
            .collect();
        parts.join(" + ")
    }
}

/// Monomial role during decomposition.
#[derive(Clone, Copy, Debug)]
enum Role {
    Pure { head: usize, exp: u64 },
    Link { head: usize, tail: usize, exp: u64 },
}

/// Partition into Fermat/chain/loop atoms. Success certifies nondegeneracy
/// for invertible polynomials; failure means the monomial pattern matches no
/// atom structure.
pub fn atom_decomposition(e: &ExponentMatrix) -> Result<AtomDecomposition, PolyError> {
    let n = e.size();
    let mut exps: Vec<Vec<u64>> = Vec::with_capacity(n);
    for r in 0..n {
        let row: Option<Vec<u64>> = e.matrix().row(r).iter().map(|x| x.to_u64()).collect();
        exps.push(row.ok_or(PolyError::NotInvertibleNondegenerate)?);
    }

    // Candidate roles per monomial. A monomial x_j^a is a pure power (a >= 2);
    // x_j^a * x_k is a link with head j. When both exponents are 1 the head
    // is ambiguous and resolved by the search below.
    let mut candidates: Vec<Vec<Role>> = Vec::with_capacity(n);
    for m in &exps {
        let support: Vec<usize> = (0..n).filter(|&j| m[j] > 0).collect();
        let mut cands = Vec::new();
        match support.as_slice() {
            [j] => {
                if m[*j] >= 2 {
                    cands.push(Role::Pure { head: *j, exp: m[*j] });
                }
            }
            [j, k] => {
                if m[*k] == 1 {
                    cands.push(Role::Link { head: *j, tail: *k, exp: m[*j] });
                }
                if m[*j] == 1 {
                    cands.push(Role::Link { head: *k, tail: *j, exp: m[*k] });
                }
            }
            _ => {}
        }
        if cands.is_empty() {
            return Err(PolyError::NotInvertibleNondegenerate);
        }
        candidates.push(cands);
    }

    let mut assignment: Vec<Role> = Vec::with_capacity(n);
    let mut head_used = vec![false; n];
    if !assign_roles(&candidates, 0, &mut head_used, &mut assignment) {
        return Err(PolyError::NotInvertibleNondegenerate);
    }
    let atoms = roles_to_atoms(n, &assignment)?;

    // Reconstruction check: the atoms must reproduce the monomial set.
    let mut rebuilt: Vec<Vec<u64>> = atoms
        .iter()
        .flat_map(|a| a.monomials(n))
        .collect();
    rebuilt.sort();
    let mut original = exps.clone();
    original.sort();
    if rebuilt != original {
        return Err(PolyError::NotInvertibleNondegenerate);
    }
    Ok(AtomDecomposition { atoms })
}

fn assign_roles(
    candidates: &[Vec<Role>],
    i: usize,
    head_used: &mut [bool],
    out: &mut Vec<Role>,
) -> bool {
    if i == candidates.len() {
        return true;
    }
    for role in &candidates[i] {
        let head = match role {
            Role::Pure { head, .. } | Role::Link { head, .. } => *head,
        };
        if head_used[head] {
            continue;
        }
        head_used[head] = true;
        out.push(*role);
        if assign_roles(candidates, i + 1, head_used, out) {
            return true;
        }
        out.pop();
        head_used[head] = false;
    }
    false
}

fn roles_to_atoms(n: usize, roles: &[Role]) -> Result<Vec<Atom>, PolyError> {
    // successor[j] = (tail, exponent) for the monomial headed at j.
    let mut succ: Vec<Option<(usize, u64)>> = vec![None; n];
    let mut pure_exp: Vec<Option<u64>> = vec![None; n];
    let mut in_degree = vec![0usize; n];
    for role in roles {
        match *role {
            Role::Pure { head, exp } => pure_exp[head] = Some(exp),
            Role::Link { head, tail, exp } => {
                succ[head] = Some((tail, exp));
                in_degree[tail] += 1;
            }
        }
    }
    if in_degree.iter().any(|&d| d > 1) {
        return Err(PolyError::NotInvertibleNondegenerate);
    }

    let mut seen = vec![false; n];
    let mut atoms = Vec::new();
    // Chains start at in-degree-0 link heads and end in a pure power.
    for start in 0..n {
        if seen[start] || in_degree[start] > 0 {
            continue;
        }
        let mut vars = Vec::new();
        let mut exponents = Vec::new();
        let mut v = start;
        loop {
            seen[v] = true;
            vars.push(v);
            match succ[v] {
                Some((next, a)) => {
                    exponents.push(a);
                    v = next;
                    if seen[v] {
                        // Running into an already-consumed variable would
                        // mean in-degree 2; ruled out above.
                        return Err(PolyError::NotInvertibleNondegenerate);
                    }
                }
                None => {
                    let Some(a) = pure_exp[v] else {
                        return Err(PolyError::NotInvertibleNondegenerate);
                    };
                    exponents.push(a);
                    break;
                }
            }
        }
        if vars.len() == 1 {
            atoms.push(Atom::Fermat { var: vars[0], exponent: exponents[0] });
        } else {
            atoms.push(Atom::Chain { vars, exponents });
        }
    }
    // Remaining variables sit on cycles.
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut vars = Vec::new();
        let mut exponents = Vec::new();
        let mut v = start;
        loop {
            seen[v] = true;
            vars.push(v);
            let Some((next, a)) = succ[v] else {
                return Err(PolyError::NotInvertibleNondegenerate);
            };
            exponents.push(a);
            v = next;
            if v == start {
                break;
            }
            if seen[v] {
                return Err(PolyError::NotInvertibleNondegenerate);
            }
        }
        atoms.push(Atom::Loop { vars, exponents });
    }
    atoms.sort_by_key(|a| a.min_var());
    Ok(atoms)
}
