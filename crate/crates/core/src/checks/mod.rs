//! Polynomial-time satisfiability checks and their sound aggregation.
//!
//! Every check either certifies SAT, certifies UNSAT or stays inconclusive.
//! Floating point appears only in the eigenvalue bounds, where any
//! comparison within [`EPSILON`] of its threshold is inconclusive and a SAT
//! certification further requires a witness confirmed by direct evaluation.

pub mod eigen;

use serde::Serialize;

use crate::counting::{solution_lower_bound, LowerBound};
use crate::dyadic::Dyadic;
use crate::pseudo_boolean::{pb_coefficients, unit_weight_direct, unsat_count_direct, PBForm, PbError, WeightScheme};
use crate::pt_solvers::{is_2sat, is_horn, solve_2sat, solve_horn};
use crate::scheme::{Assignment, Fill, Scheme, Status};
use crate::transforms::{order_or_default, resolve, resolve_pair, Columns, Satisfiability, TransformError};

/// Safety margin on float comparisons.
pub const EPSILON: f64 = 1e-8;
/// Exhaustive eigenvalue mode accepts at most this many variables.
pub const MAX_EXACT_EIGEN_VARS: usize = 24;
/// [`run_all`] uses exhaustive eigenvalue mode up to this many variables.
pub const RUN_ALL_EXACT_EIGEN_VARS: usize = 16;
/// Resolution chains give up once a scheme grows beyond this many rows.
pub const MAX_RESOLUTION_ROWS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error(transparent)]
    PseudoBoolean(#[from] PbError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("exact eigenvalue mode needs n <= {limit}, scheme has {n} variables")]
    TooManyVariables { n: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    SatCertified,
    UnsatCertified,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EigenMode {
    /// Enumerates every assignment.
    ExactSmallN,
    /// Assignment-free bounds; SAT only through a local-search witness.
    Relaxed,
}

/// Structured support for a verdict. Dyadic values are serialized as
/// `"a/b"` strings.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Evidence {
    None,
    Note { message: String },
    Witness { assignment: Assignment },
    Mass { mass: Dyadic },
    CoefficientBound { constant: Dyadic, mass: Dyadic },
    Parity { pbform: Option<Dyadic>, direct: u128 },
    Eigen { mode: EigenMode, e_min: f64, e_max: f64, bound: f64, witness: Option<Assignment> },
    Resolution { applied: Vec<usize>, status: Status, rows: usize },
    Solver { method: String, steps: usize, witness: Option<Assignment> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub verdict: VerdictKind,
    pub evidence: Evidence,
}

impl Verdict {
    pub fn sat(evidence: Evidence) -> Self {
        Verdict { verdict: VerdictKind::SatCertified, evidence }
    }

    pub fn unsat(evidence: Evidence) -> Self {
        Verdict { verdict: VerdictKind::UnsatCertified, evidence }
    }

    pub fn inconclusive(evidence: Evidence) -> Self {
        Verdict { verdict: VerdictKind::Inconclusive, evidence }
    }

    fn note(message: &str) -> Self {
        Verdict::inconclusive(Evidence::Note { message: message.to_string() })
    }

    pub fn is_sat(&self) -> bool {
        self.verdict == VerdictKind::SatCertified
    }

    pub fn is_unsat(&self) -> bool {
        self.verdict == VerdictKind::UnsatCertified
    }
}

/// All rows have a positive literal (then all-true solves) or all rows have a
/// negative one (then all-false solves).
pub fn check_all_rows_polarity(s: &Scheme) -> Verdict {
    for (fill, value) in [(Fill::Positive, true), (Fill::Negative, false)] {
        if s.rows().iter().all(|r| r.contains(&fill)) {
            let x = Assignment::from_bools(&vec![value; s.n()]);
            return Verdict::sat(Evidence::Witness { assignment: x });
        }
    }
    Verdict::inconclusive(Evidence::None)
}

/// `Σ 2^−k_i`.
pub fn clause_mass(s: &Scheme) -> Dyadic {
    (0..s.m()).map(|i| Dyadic::pow2_neg(s.row_len(i) as u32)).sum()
}

/// Fewer violated assignments than assignments: `Σ 2^−k_i < 1` proves SAT.
pub fn check_clause_mass(s: &Scheme) -> Verdict {
    let mass = clause_mass(s);
    if s.has_empty_clause() {
        return Verdict::unsat(Evidence::Mass { mass });
    }
    debug_assert_eq!(solution_lower_bound(s).certifies_sat(), mass < Dyadic::ONE);
    if mass < Dyadic::ONE {
        Verdict::sat(Evidence::Mass { mass })
    } else {
        Verdict::inconclusive(Evidence::Mass { mass })
    }
}

/// `Σ|λ| + Σ|μ| + Σ|ν| < C` means `u` never reaches zero.
pub fn check_coefficient_bound(p: &PBForm) -> Verdict {
    let (constant, mass) = (p.constant, p.abs_mass());
    let ev = Evidence::CoefficientBound { constant, mass };
    if mass < constant {
        Verdict::unsat(ev)
    } else {
        Verdict::inconclusive(ev)
    }
}

/// Unit-weight `u` at all-true, computed from the coefficients and directly.
/// Every nonempty clause contributes an even amount at any assignment, so an
/// odd value signals an odd number of empty clauses.
pub fn check_parity(s: &Scheme) -> Result<Verdict, CheckError> {
    let all_true = Assignment::all_true(s.n());
    let direct = unit_weight_direct(s, &all_true).expect("length matches");
    let pbform = if s.is_3sat() {
        let p = pb_coefficients(s, &WeightScheme::Unit)?;
        let v = p.constant - p.linear.iter().copied().sum::<Dyadic>() + p.quadratic.values().copied().sum::<Dyadic>()
            - p.cubic.values().copied().sum::<Dyadic>();
        if v != Dyadic::from_int(direct as i128) {
            return Err(CheckError::Internal(format!("parity paths disagree: {v} vs {direct}")));
        }
        Some(v)
    } else {
        None
    };
    let ev = Evidence::Parity { pbform, direct };
    Ok(if direct % 2 == 1 { Verdict::unsat(ev) } else { Verdict::inconclusive(ev) })
}

/// `M = (C/n) I + μ/2`, so that `xᵀMx = C + Σ μ_ij x_i x_j` on `{−1, 1}^n`.
pub fn quadratic_matrix(p: &PBForm) -> Vec<Vec<f64>> {
    let n = p.n;
    let mut m = vec![vec![0.0; n]; n];
    if n == 0 {
        return m;
    }
    let diag = p.constant.to_f64() / n as f64;
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = diag;
    }
    for (&(i, j), v) in &p.quadratic {
        m[i][j] = v.to_f64() / 2.0;
        m[j][i] = m[i][j];
    }
    m
}

/// Extreme eigenvalues of [`quadratic_matrix`].
pub fn eigen_range(p: &PBForm) -> (f64, f64) {
    let ev = eigen::symmetric_eigenvalues(quadratic_matrix(p));
    (ev.first().copied().unwrap_or(0.0), ev.last().copied().unwrap_or(0.0))
}

/// `Σ λ_j x_j + Σ ν_ijk x_i x_j x_k`.
fn odd_part(p: &PBForm, x: &[i8]) -> f64 {
    let lin: f64 = p.linear.iter().zip(x).map(|(l, &v)| l.to_f64() * v as f64).sum();
    let cub: f64 = p.cubic.iter().map(|(&(i, j, k), v)| v.to_f64() * (x[i] * x[j] * x[k]) as f64).sum();
    lin + cub
}

fn abs_odd_mass(p: &PBForm) -> f64 {
    p.linear.iter().map(|v| v.abs().to_f64()).sum::<f64>() + p.cubic.values().map(|v| v.abs().to_f64()).sum::<f64>()
}

fn signs(code: u64, n: usize) -> Vec<i8> {
    (0..n).map(|j| if code >> j & 1 == 1 { 1 } else { -1 }).collect()
}

fn check_exact_n(n: usize, mode: EigenMode) -> Result<(), CheckError> {
    if mode == EigenMode::ExactSmallN && n > MAX_EXACT_EIGEN_VARS {
        return Err(CheckError::TooManyVariables { n, limit: MAX_EXACT_EIGEN_VARS });
    }
    Ok(())
}

/// Rayleigh lower bound `u(x) ≥ n e_min − Σλx − Σνxxx`: UNSAT when it is
/// positive for every `x` (exact mode) or for the worst-case signs (relaxed).
pub fn check_eigen_lower(p: &PBForm, mode: EigenMode) -> Result<Verdict, CheckError> {
    let n = p.n;
    if n == 0 {
        return Ok(Verdict::note("no variables"));
    }
    check_exact_n(n, mode)?;
    let (e_min, e_max) = eigen_range(p);
    let bound = match mode {
        EigenMode::ExactSmallN => {
            (0..1u64 << n).map(|c| n as f64 * e_min - odd_part(p, &signs(c, n))).fold(f64::INFINITY, f64::min)
        }
        EigenMode::Relaxed => n as f64 * e_min - abs_odd_mass(p),
    };
    let ev = Evidence::Eigen { mode, e_min, e_max, bound, witness: None };
    Ok(if bound > EPSILON { Verdict::unsat(ev) } else { Verdict::inconclusive(ev) })
}

/// Rayleigh upper bound `u(x) ≤ n e_max − Σλx − Σνxxx`: an `x` with bound
/// below 1 is a candidate solution. It certifies SAT only if it satisfies
/// `s` by direct evaluation. Relaxed mode takes its candidate from greedy
/// descent on `u`.
pub fn check_eigen_upper(s: &Scheme, p: &PBForm, mode: EigenMode) -> Result<Verdict, CheckError> {
    let n = p.n;
    if n == 0 {
        return Ok(Verdict::note("no variables"));
    }
    check_exact_n(n, mode)?;
    let (e_min, e_max) = eigen_range(p);
    let confirmed = |x: &[i8]| {
        let a = Assignment::from_signs(x.to_vec()).expect("signs");
        unsat_count_direct(s, &a).expect("length matches") == 0
    };
    let (bound, witness) = match mode {
        EigenMode::ExactSmallN => {
            let mut best = f64::INFINITY;
            let mut witness = None;
            for c in 0..1u64 << n {
                let x = signs(c, n);
                let b = n as f64 * e_max - odd_part(p, &x);
                best = best.min(b);
                if witness.is_none() && b < 1.0 - EPSILON && confirmed(&x) {
                    witness = Some(x);
                }
            }
            (best, witness)
        }
        EigenMode::Relaxed => {
            let x = greedy_descent(p);
            let b = n as f64 * e_max - odd_part(p, &x);
            let w = confirmed(&x).then_some(x);
            (b, w)
        }
    };
    let witness = witness.map(|x| Assignment::from_signs(x).expect("signs"));
    let found = witness.is_some();
    let ev = Evidence::Eigen { mode, e_min, e_max, bound, witness };
    Ok(if found { Verdict::sat(ev) } else { Verdict::inconclusive(ev) })
}

/// Single-flip descent on `u` from all-true and from all-false; returns the
/// better local minimum.
fn greedy_descent(p: &PBForm) -> Vec<i8> {
    let n = p.n;
    let mut best: Option<(Dyadic, Vec<i8>)> = None;
    for start in [1i8, -1] {
        let mut x = vec![start; n];
        let mut u = p.eval_signs(&x);
        loop {
            let mut step = None;
            for j in 0..n {
                x[j] = -x[j];
                let v = p.eval_signs(&x);
                x[j] = -x[j];
                if v < u && step.is_none_or(|(_, w)| v < w) {
                    step = Some((j, v));
                }
            }
            match step {
                Some((j, v)) => {
                    x[j] = -x[j];
                    u = v;
                }
                None => break,
            }
        }
        if best.as_ref().is_none_or(|(b, _)| u < *b) {
            best = Some((u, x));
        }
    }
    best.map(|(_, x)| x).unwrap_or_default()
}

/// Lower bound first (UNSAT), then upper bound (SAT).
pub fn check_eigen_bounds(s: &Scheme, p: &PBForm, mode: EigenMode) -> Result<Verdict, CheckError> {
    let lower = check_eigen_lower(p, mode)?;
    if lower.is_unsat() {
        return Ok(lower);
    }
    let upper = check_eigen_upper(s, p, mode)?;
    Ok(if upper.is_sat() { upper } else { lower })
}

/// Resolves the variables of `order` (0-based, original numbering) one
/// after another; UNSAT once a contradiction or empty clause shows up.
pub fn check_resolution_chain(s: &Scheme, order: &[usize]) -> Result<Verdict, CheckError> {
    let mut cols = Columns::new(s);
    let mut applied = Vec::new();
    let mut cur = s.clone();
    for &var in order {
        if cur.status().is_unsat() {
            break;
        }
        let col = cols.position(var).ok_or_else(|| {
            TransformError::Order(format!("variable {} not in scheme or repeated", var + 1))
        })?;
        let r = resolve(&cur, col)?;
        if r.scheme.n() < cur.n() {
            cols.delete(col);
        }
        cur = r.scheme;
        cols.set(cur.clone());
        applied.push(var + 1);
        if cur.m() > MAX_RESOLUTION_ROWS {
            return Ok(Verdict::note("resolution chain exceeded the row limit"));
        }
    }
    let status = cur.status();
    let ev = Evidence::Resolution { applied, status, rows: cur.m() };
    Ok(if status.is_unsat() { Verdict::unsat(ev) } else { Verdict::inconclusive(ev) })
}

/// One resolution of a single clause pair, rows numbered in the current
/// scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairStep {
    pub var: usize,
    pub pos_row: usize,
    pub neg_row: usize,
}

/// Applies [`resolve_pair`] step by step. Each step replaces two clauses by
/// a consequence of them, so reaching a contradiction proves UNSAT.
pub fn check_resolution_pairs(s: &Scheme, steps: &[PairStep]) -> Result<Verdict, CheckError> {
    let mut cur = s.clone();
    let mut applied = Vec::new();
    for st in steps {
        if cur.status().is_unsat() {
            break;
        }
        cur = resolve_pair(&cur, st.var, st.pos_row, st.neg_row)?.scheme;
        applied.push(st.var + 1);
    }
    let status = cur.status();
    let ev = Evidence::Resolution { applied, status, rows: cur.m() };
    Ok(if status.is_unsat() { Verdict::unsat(ev) } else { Verdict::inconclusive(ev) })
}

/// Exact solving for 2-SAT or HORN schemes; `None` outside both classes.
pub fn check_special_classes(s: &Scheme) -> Option<(&'static str, Verdict)> {
    let (name, r) = if is_2sat(s) {
        ("2sat", solve_2sat(s).ok()?)
    } else if is_horn(s) {
        ("horn", solve_horn(s).ok()?)
    } else {
        return None;
    };
    let ev = Evidence::Solver { method: name.to_string(), steps: r.steps, witness: r.witness.clone() };
    Some((name, if r.verdict == Satisfiability::Sat { Verdict::sat(ev) } else { Verdict::unsat(ev) }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckEntry {
    pub name: String,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub checks: Vec<CheckEntry>,
    pub overall: VerdictKind,
    /// Names of the checks that certified `overall`.
    pub certified_by: Vec<String>,
}

impl CheckReport {
    pub fn get(&self, name: &str) -> Option<&Verdict> {
        self.checks.iter().find(|c| c.name == name).map(|c| &c.verdict)
    }
}

/// Runs every check. Coefficient-based checks need a 3-SAT scheme and are
/// inconclusive otherwise.
pub fn run_all(s: &Scheme) -> Result<CheckReport, CheckError> {
    let mut checks = Vec::new();
    let mut push = |name: &str, verdict: Verdict| checks.push(CheckEntry { name: name.to_string(), verdict });

    push("row_polarity", check_all_rows_polarity(s));
    push("clause_mass", check_clause_mass(s));
    let lb = solution_lower_bound(s);
    push(
        "solution_lower_bound",
        Verdict {
            verdict: if lb.certifies_sat() { VerdictKind::SatCertified } else { VerdictKind::Inconclusive },
            evidence: Evidence::Note { message: format!("N >= {lb}") },
        },
    );
    if lb == LowerBound::NegInfinity {
        debug_assert!(s.has_empty_clause());
    }
    if s.is_3sat() {
        let p = pb_coefficients(s, &WeightScheme::Canonical)?;
        push("coefficient_bound", check_coefficient_bound(&p));
        let mode = if s.n() <= RUN_ALL_EXACT_EIGEN_VARS { EigenMode::ExactSmallN } else { EigenMode::Relaxed };
        push("eigen_lower", check_eigen_lower(&p, mode)?);
        push("eigen_upper", check_eigen_upper(s, &p, mode)?);
    } else {
        for name in ["coefficient_bound", "eigen_lower", "eigen_upper"] {
            push(name, Verdict::note("needs clauses of at most three literals"));
        }
    }
    push("parity", check_parity(s)?);
    let order = order_or_default(None, s.n())?;
    push("resolution_chain", check_resolution_chain(s, &order)?);
    if let Some((name, v)) = check_special_classes(s) {
        push(name, v);
    }

    let sat: Vec<String> = checks.iter().filter(|c| c.verdict.is_sat()).map(|c| c.name.clone()).collect();
    let unsat: Vec<String> = checks.iter().filter(|c| c.verdict.is_unsat()).map(|c| c.name.clone()).collect();
    let (overall, certified_by) = match (sat.is_empty(), unsat.is_empty()) {
        (false, false) => {
            return Err(CheckError::Internal(format!("checks {sat:?} certify SAT while {unsat:?} certify UNSAT")));
        }
        (false, true) => (VerdictKind::SatCertified, sat),
        (true, false) => (VerdictKind::UnsatCertified, unsat),
        (true, true) => (VerdictKind::Inconclusive, Vec::new()),
    };
    Ok(CheckReport { checks, overall, certified_by })
}
