//! Minimization of `u(x)` by eliminating one variable at a time.
//!
//! Splitting off `x_i` writes `u(x) = u₀(y) + x_i S_i(y)`, with `S_i`
//! independent of `x_i`. When `S_i ≥ 0` everywhere `x_i = −1` is optimal for
//! every `y`, when `S_i ≤ 0` everywhere `x_i = +1` is, and otherwise both
//! values are explored. Each node holds a genuine restricted scheme and its
//! recomputed coefficients, so the coefficient bound applies at every node.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::dyadic::Dyadic;
use crate::pseudo_boolean::{pb_coefficients, PBForm, PbError, WeightScheme};
use crate::scheme::{Assignment, Scheme};
use crate::transforms::{order_or_default, restrict_unchecked, Satisfiability, TransformError};

/// Largest S-factor support enumerated.
pub const MAX_SUPPORT: usize = 24;
pub const DEFAULT_BRANCH_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MinimizeError {
    #[error(transparent)]
    PseudoBoolean(#[from] PbError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("branch limit {limit} exceeded; no answer")]
    BranchLimit { limit: u64 },
    #[error("S-factor of variable {var} has {size} support variables, limit is {limit}")]
    SupportTooLarge { var: usize, size: usize, limit: usize },
    #[error("variable {var} out of range")]
    Variable { var: usize },
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Case {
    /// `S ≥ 0`: fix `x = −1`.
    #[serde(rename = "i")]
    NonNegative,
    /// `S ≤ 0`: fix `x = +1`.
    #[serde(rename = "ii")]
    NonPositive,
    /// Both signs: branch.
    #[serde(rename = "iii")]
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SFactor {
    pub var: usize,
    /// Variables other than `var` that occur in `S`, ascending.
    pub support: Vec<usize>,
    /// `S` at every assignment of the support; bit `b` of the index is the
    /// sign of `support[b]` (set = `+1`).
    pub table: Vec<Dyadic>,
    pub s_min: Dyadic,
    pub s_max: Dyadic,
}

impl SFactor {
    pub fn case(&self) -> Case {
        if self.s_min >= Dyadic::ZERO {
            Case::NonNegative
        } else if self.s_max <= Dyadic::ZERO {
            Case::NonPositive
        } else {
            Case::Mixed
        }
    }

    pub fn values(&self) -> BTreeSet<Dyadic> {
        self.table.iter().copied().collect()
    }

    /// `S` at a full assignment (entries outside the support are ignored).
    pub fn eval(&self, x: &[i8]) -> Dyadic {
        let idx = self.support.iter().enumerate().filter(|&(_, &j)| x[j] == 1).fold(0usize, |a, (b, _)| a | 1 << b);
        self.table[idx]
    }
}

/// `S_var(y) = −λ_var + Σ_j μ_var,j x_j − Σ_jk ν_var,j,k x_j x_k` read off `p`.
pub fn s_factor_of(p: &PBForm, var: usize) -> Result<SFactor, MinimizeError> {
    if var >= p.n {
        return Err(MinimizeError::Variable { var });
    }
    let mut quad: Vec<(usize, Dyadic)> = Vec::new();
    let mut cub: Vec<(usize, usize, Dyadic)> = Vec::new();
    for (&(i, j), &v) in &p.quadratic {
        if i == var {
            quad.push((j, v));
        } else if j == var {
            quad.push((i, v));
        }
    }
    for (&(i, j, k), &v) in &p.cubic {
        let others = match var {
            _ if var == i => (j, k),
            _ if var == j => (i, k),
            _ if var == k => (i, j),
            _ => continue,
        };
        cub.push((others.0, others.1, v));
    }
    let support: Vec<usize> = quad
        .iter()
        .map(|&(j, _)| j)
        .chain(cub.iter().flat_map(|&(a, b, _)| [a, b]))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if support.len() > MAX_SUPPORT {
        return Err(MinimizeError::SupportTooLarge { var, size: support.len(), limit: MAX_SUPPORT });
    }
    let pos = |j: usize| support.binary_search(&j).unwrap();
    let sign = |idx: usize, j: usize| if idx >> pos(j) & 1 == 1 { 1i128 } else { -1 };
    let table: Vec<Dyadic> = (0..1usize << support.len())
        .map(|idx| {
            let mut v = -p.linear[var];
            for &(j, c) in &quad {
                v += c * sign(idx, j);
            }
            for &(a, b, c) in &cub {
                v -= c * (sign(idx, a) * sign(idx, b));
            }
            v
        })
        .collect();
    let s_min = *table.iter().min().unwrap();
    let s_max = *table.iter().max().unwrap();
    let f = SFactor { var, support, table, s_min, s_max };

    // u(+1, y) − u(−1, y) = 2 S(y), spot-checked at y = all-true / all-false
    for y in [1i8, -1] {
        let mut x = vec![y; p.n];
        x[var] = 1;
        let plus = p.eval_signs(&x);
        x[var] = -1;
        let minus = p.eval_signs(&x);
        if plus - minus != f.eval(&x) * 2 {
            return Err(MinimizeError::Internal(format!("S-factor identity fails for variable {}", var + 1)));
        }
    }
    Ok(f)
}

/// S-factor of column `var` under canonical weights.
pub fn s_factor(s: &Scheme, var: usize) -> Result<SFactor, MinimizeError> {
    s_factor_of(&pb_coefficients(s, &WeightScheme::Canonical)?, var)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimizeOptions {
    /// Prune with the coefficient bound `C − Σ|coef|`.
    pub shortcut: bool,
    /// Maximum number of case-(iii) branch points.
    pub branch_limit: Option<u64>,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions { shortcut: true, branch_limit: Some(DEFAULT_BRANCH_LIMIT) }
    }
}

/// Coefficient bound at one node, scaled to integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundRecord {
    /// Variables fixed on the path to the node, 1-based, as `±var`.
    pub path: Vec<i64>,
    pub scale: i128,
    pub scaled_constant: i128,
    pub scaled_mass: i128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub depth: usize,
    /// 1-based variable.
    pub var: usize,
    pub case: Case,
    pub s_min: Dyadic,
    pub s_max: Dyadic,
    /// Value fixed in cases (i) and (ii).
    pub fixed: Option<i8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimizeOutcome {
    pub u_min: Dyadic,
    pub minimizer: Assignment,
    pub branch_count: u64,
    pub shortcut_hits: u64,
    pub verdict: Satisfiability,
    /// First node on the unbranched path whose coefficient bound already
    /// rules out `u = 0`; it proves UNSAT.
    pub unsat_certificate: Option<BoundRecord>,
    pub trace: Vec<TraceStep>,
}

struct Search<'a> {
    order: &'a [usize],
    opts: &'a MinimizeOptions,
    branch_count: u64,
    shortcut_hits: u64,
    certificate: Option<BoundRecord>,
    trace: Vec<TraceStep>,
    /// Best leaf so far: violated clauses and assignment.
    best: Option<(usize, Vec<i8>)>,
}

fn bound_record(p: &PBForm, path: &[(usize, i8)]) -> BoundRecord {
    let mass = p.abs_mass();
    let e = p.constant.exponent().max(mass.exponent()).max(p.scale_exponent());
    BoundRecord {
        path: path.iter().map(|&(v, x)| (v as i64 + 1) * x as i64).collect(),
        scale: 1 << e,
        scaled_constant: p.constant.scaled_numerator(e),
        scaled_mass: mass.scaled_numerator(e),
    }
}

impl Search<'_> {
    fn done(&self) -> bool {
        matches!(self.best, Some((0, _)))
    }

    /// `branched`: whether a case-(iii) point lies above this node.
    fn node(&mut self, s: &Scheme, depth: usize, x: &mut Vec<i8>, path: &mut Vec<(usize, i8)>, branched: bool) -> Result<(), MinimizeError> {
        if self.done() {
            return Ok(());
        }
        if depth == self.order.len() {
            // every column fixed: the remaining rows are exactly the violated ones
            let u = s.m();
            if self.best.as_ref().is_none_or(|(b, _)| u < *b) {
                self.best = Some((u, x.clone()));
            }
            return Ok(());
        }
        let p = pb_coefficients(s, &WeightScheme::Canonical)?;
        if self.opts.shortcut && p.abs_mass() < p.constant && !branched && self.certificate.is_none() {
            self.certificate = Some(bound_record(&p, path));
            self.shortcut_hits += 1;
        }
        let var = self.order[depth];
        let f = s_factor_of(&p, var)?;
        let case = f.case();
        let fixed = match case {
            Case::NonNegative => Some(-1),
            Case::NonPositive => Some(1),
            Case::Mixed => None,
        };
        self.trace.push(TraceStep { depth, var: var + 1, case, s_min: f.s_min, s_max: f.s_max, fixed });
        match fixed {
            Some(v) => self.child(s, depth, var, v, x, path, branched),
            None => {
                self.branch_count += 1;
                if let Some(limit) = self.opts.branch_limit {
                    if self.branch_count > limit {
                        return Err(MinimizeError::BranchLimit { limit });
                    }
                }
                for v in [-1i8, 1] {
                    let next = restrict_unchecked(s, var, v == 1);
                    if self.opts.shortcut && self.prunable(&next)? {
                        self.shortcut_hits += 1;
                        continue;
                    }
                    x[var] = v;
                    path.push((var, v));
                    self.node(&next, depth + 1, x, path, true)?;
                    path.pop();
                }
                Ok(())
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn child(&mut self, s: &Scheme, depth: usize, var: usize, v: i8, x: &mut Vec<i8>, path: &mut Vec<(usize, i8)>, branched: bool) -> Result<(), MinimizeError> {
        let next = restrict_unchecked(s, var, v == 1);
        x[var] = v;
        path.push((var, v));
        let r = self.node(&next, depth + 1, x, path, branched);
        path.pop();
        r
    }

    /// The subtree cannot beat the incumbent: `u ≥ ⌈C − Σ|coef|⌉ ≥ best`.
    fn prunable(&self, s: &Scheme) -> Result<bool, MinimizeError> {
        let Some((best, _)) = &self.best else { return Ok(false) };
        let p = pb_coefficients(s, &WeightScheme::Canonical)?;
        Ok((p.constant - p.abs_mass()).ceil() >= *best as i128)
    }
}

/// Exact minimum of `u` over all assignments with a minimizing assignment.
/// `order` must be a permutation of the variables (ascending by default).
pub fn minimize_u(s: &Scheme, order: Option<&[usize]>, opts: &MinimizeOptions) -> Result<MinimizeOutcome, MinimizeError> {
    let root = pb_coefficients(s, &WeightScheme::Canonical)?;
    let order = order_or_default(order, s.n())?;
    let mut search = Search {
        order: &order,
        opts,
        branch_count: 0,
        shortcut_hits: 0,
        certificate: None,
        trace: Vec::new(),
        best: None,
    };
    let mut x = vec![-1i8; s.n()];
    search.node(s, 0, &mut x, &mut Vec::new(), false)?;
    let (u, signs) = search.best.expect("the first leaf is never pruned");
    let minimizer = Assignment::from_signs(signs).expect("signs");
    let u_min = Dyadic::from_int(u as i128);
    if root.eval(&minimizer)? != u_min {
        return Err(MinimizeError::Internal("u at the minimizer differs from u_min".into()));
    }
    let verdict = if u == 0 { Satisfiability::Sat } else { Satisfiability::Unsat };
    if search.certificate.is_some() && u == 0 {
        return Err(MinimizeError::Internal("coefficient bound contradicts a solution".into()));
    }
    Ok(MinimizeOutcome {
        u_min,
        minimizer,
        branch_count: search.branch_count,
        shortcut_hits: search.shortcut_hits,
        verdict,
        unsat_certificate: search.certificate,
        trace: search.trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::transforms::restrict;

    #[test]
    fn f5_first_s_factor() {
        let f = s_factor(&fixtures::f5(), 0).unwrap();
        assert_eq!(f.support, vec![1, 2]);
        assert_eq!(f.values(), [Dyadic::ZERO, Dyadic::new(1, 1)].into_iter().collect());
        assert_eq!(f.case(), Case::NonNegative);
    }

    #[test]
    fn f5_second_s_factor() {
        let s = restrict(&fixtures::f5(), 0, false).unwrap();
        let f = s_factor(&s, 1).unwrap();
        assert_eq!(f.support, vec![2, 3]);
        // (−1 + x4 + x3 − x3x4)/8 at (x3, x4) = (−,−), (+,−), (−,+), (+,+)
        let eighth = |v| Dyadic::new(v, 3);
        assert_eq!(f.table, vec![eighth(-4), eighth(0), eighth(0), eighth(0)]);
        assert_eq!(f.case(), Case::NonPositive);
    }

    #[test]
    fn g_prime_second_s_factor() {
        let f = s_factor(&fixtures::g_ext(), 1).unwrap();
        assert_eq!(f.support, vec![2, 4]);
        assert_eq!(f.s_max, Dyadic::ZERO);
        assert_eq!(f.s_min, Dyadic::new(-8, 3));
        assert_eq!(f.case(), Case::NonPositive);
    }

    #[test]
    fn g_is_fully_mixed() {
        for v in 0..5 {
            assert_eq!(s_factor(&fixtures::g(), v).unwrap().case(), Case::Mixed, "variable {}", v + 1);
        }
    }

    #[test]
    fn f5_walkthrough() {
        let out = minimize_u(&fixtures::f5(), None, &MinimizeOptions::default()).unwrap();
        assert_eq!(out.trace[0].case, Case::NonNegative);
        assert_eq!(out.trace[0].fixed, Some(-1));
        assert_eq!(out.trace[1].case, Case::NonPositive);
        let cert = out.unsat_certificate.unwrap();
        assert_eq!((cert.scale, cert.scaled_constant, cert.scaled_mass), (8, 11, 9));
        assert_eq!(cert.path, vec![-1]);
        assert_eq!(out.u_min, Dyadic::ONE);
        assert_eq!(out.verdict, Satisfiability::Unsat);
    }

    #[test]
    fn g_prime_without_branching() {
        let out = minimize_u(&fixtures::g_ext(), None, &MinimizeOptions::default()).unwrap();
        assert_eq!(out.branch_count, 0);
        assert_eq!(out.u_min, Dyadic::ZERO);
        assert!(fixtures::g().evaluate(&out.minimizer).unwrap());
    }

    #[test]
    fn g_branches_and_limit() {
        let out = minimize_u(&fixtures::g(), None, &MinimizeOptions::default()).unwrap();
        assert!(out.branch_count > 0);
        assert_eq!(out.u_min, Dyadic::ZERO);
        let tight = MinimizeOptions { shortcut: false, branch_limit: Some(0) };
        assert_eq!(minimize_u(&fixtures::g(), None, &tight), Err(MinimizeError::BranchLimit { limit: 0 }));
    }

    #[test]
    fn shortcut_does_not_change_results() {
        for (_, s) in fixtures::all() {
            let on = minimize_u(&s, None, &MinimizeOptions::default()).unwrap();
            let off = minimize_u(&s, None, &MinimizeOptions { shortcut: false, branch_limit: None }).unwrap();
            assert_eq!((on.u_min, on.verdict), (off.u_min, off.verdict));
            assert!(off.unsat_certificate.is_none());
        }
    }

    #[test]
    fn empty_and_errors() {
        let out = minimize_u(&Scheme::empty(0), None, &MinimizeOptions::default()).unwrap();
        assert_eq!(out.u_min, Dyadic::ZERO);
        let e = crate::format::parse_scheme_text("0\n").unwrap();
        assert_eq!(minimize_u(&e, None, &MinimizeOptions::default()).unwrap().u_min, Dyadic::ONE);
        let four = crate::format::parse_scheme_text("+ + + +\n").unwrap();
        assert!(matches!(minimize_u(&four, None, &MinimizeOptions::default()), Err(MinimizeError::PseudoBoolean(_))));
        assert!(s_factor(&fixtures::f5(), 9).is_err());
    }
}
