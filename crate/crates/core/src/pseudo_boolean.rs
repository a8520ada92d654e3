//! The unsatisfied-clause function
//! `u(x) = C − Σ λ_j x_j + Σ μ_ij x_i x_j − Σ ν_ijk x_i x_j x_k`
//! of a 3-SAT scheme, with exact dyadic coefficients.
//!
//! Each clause `i` contributes `α_i ∏_j (1 − f_ij x_j)`, which is `α_i 2^k_i`
//! when the clause is violated and 0 otherwise. With canonical weights
//! `α_i = 2^−k_i`, `u(x)` is the number of violated clauses.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::scheme::{Assignment, Fill, Scheme, SchemeError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PbError {
    #[error("clause {clause} has {len} literals; reduce the formula to 3-SAT first")]
    ClauseTooLong { clause: usize, len: usize },
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("weight {index} is {value}, weights must be positive")]
    NonPositiveWeight { index: usize, value: Dyadic },
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("exhaustive extension search over {count} candidates exceeds the limit {limit}")]
    TooManyExtensions { count: u128, limit: u128 },
    #[error("no extension is satisfiable")]
    NoSatisfiableExtension,
    #[error(transparent)]
    Oracle(#[from] crate::oracle::OracleError),
}

/// Clause weights `α_i`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightScheme {
    /// `α_i = 2^−k_i`.
    #[default]
    Canonical,
    /// `α_i = 1`.
    Unit,
    Custom(Vec<Dyadic>),
}

impl WeightScheme {
    /// The preset `α_i = c_i 2^−|Σ_j f_ij|`.
    pub fn parity_damped(s: &Scheme) -> WeightScheme {
        let w = (0..s.m())
            .map(|i| {
                let k = s.row_len(i) as u32;
                let sum: i32 = s.rows()[i].iter().map(|f| f.value() as i32).sum();
                Dyadic::pow2_neg(k + sum.unsigned_abs())
            })
            .collect();
        WeightScheme::Custom(w)
    }

    pub fn weights(&self, s: &Scheme) -> Result<Vec<Dyadic>, PbError> {
        let w: Vec<Dyadic> = match self {
            WeightScheme::Canonical => (0..s.m()).map(|i| Dyadic::pow2_neg(s.row_len(i) as u32)).collect(),
            WeightScheme::Unit => vec![Dyadic::ONE; s.m()],
            WeightScheme::Custom(w) => {
                if w.len() != s.m() {
                    return Err(PbError::WeightCount { expected: s.m(), got: w.len() });
                }
                w.clone()
            }
        };
        if let Some((index, &value)) = w.iter().enumerate().find(|(_, v)| !v.is_positive()) {
            return Err(PbError::NonPositiveWeight { index, value });
        }
        Ok(w)
    }
}

/// Coefficients of `u`. Zero entries are never stored in `quadratic` or
/// `cubic`; keys are strictly increasing 0-based column indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PBForm {
    pub n: usize,
    pub constant: Dyadic,
    pub linear: Vec<Dyadic>,
    pub quadratic: BTreeMap<(usize, usize), Dyadic>,
    pub cubic: BTreeMap<(usize, usize, usize), Dyadic>,
    pub weights: WeightScheme,
    /// Largest denominator exponent among the clause weights.
    pub weight_exponent: u32,
}

/// Rejects clauses with more than three literals.
pub fn require_3sat(s: &Scheme) -> Result<(), PbError> {
    match (0..s.m()).find(|&i| s.row_len(i) > 3) {
        Some(i) => Err(PbError::ClauseTooLong { clause: i + 1, len: s.row_len(i) }),
        None => Ok(()),
    }
}

fn add_entry<K: Ord>(map: &mut BTreeMap<K, Dyadic>, key: K, v: Dyadic) {
    let e = map.entry(key).or_insert(Dyadic::ZERO);
    *e += v;
}

pub fn pb_coefficients(s: &Scheme, w: &WeightScheme) -> Result<PBForm, PbError> {
    require_3sat(s)?;
    let alpha = w.weights(s)?;
    let mut p = PBForm {
        n: s.n(),
        constant: Dyadic::ZERO,
        linear: vec![Dyadic::ZERO; s.n()],
        quadratic: BTreeMap::new(),
        cubic: BTreeMap::new(),
        weights: w.clone(),
        weight_exponent: alpha.iter().map(|a| a.exponent()).max().unwrap_or(0),
    };
    for (i, &a) in alpha.iter().enumerate() {
        let lits: Vec<(usize, i128)> = s.literals(i).map(|(j, f)| (j, f.value() as i128)).collect();
        p.constant += a;
        for (x, &(j, f)) in lits.iter().enumerate() {
            p.linear[j] += a * f;
            for (y, &(k, g)) in lits.iter().enumerate().skip(x + 1) {
                add_entry(&mut p.quadratic, (j, k), a * (f * g));
                for &(l, h) in &lits[y + 1..] {
                    add_entry(&mut p.cubic, (j, k, l), a * (f * g * h));
                }
            }
        }
    }
    p.quadratic.retain(|_, v| !v.is_zero());
    p.cubic.retain(|_, v| !v.is_zero());
    Ok(p)
}

impl PBForm {
    pub fn eval(&self, x: &Assignment) -> Result<Dyadic, PbError> {
        if x.len() != self.n {
            return Err(SchemeError::AssignmentLength { expected: self.n, found: x.len() }.into());
        }
        Ok(self.eval_signs(x.signs()))
    }

    pub(crate) fn eval_signs(&self, x: &[i8]) -> Dyadic {
        let mut u = self.constant;
        for (j, &l) in self.linear.iter().enumerate() {
            u -= l * x[j] as i128;
        }
        for (&(i, j), &v) in &self.quadratic {
            u += v * (x[i] * x[j]) as i128;
        }
        for (&(i, j, k), &v) in &self.cubic {
            u -= v * (x[i] * x[j] * x[k]) as i128;
        }
        u
    }

    /// `Σ|λ| + Σ|μ| + Σ|ν|`, the largest amount the non-constant terms can
    /// subtract from `C`.
    pub fn abs_mass(&self) -> Dyadic {
        self.linear.iter().map(|v| v.abs()).sum::<Dyadic>()
            + self.quadratic.values().map(|v| v.abs()).sum::<Dyadic>()
            + self.cubic.values().map(|v| v.abs()).sum::<Dyadic>()
    }

    pub fn has_cubic(&self) -> bool {
        !self.cubic.is_empty()
    }

    fn coefficients(&self) -> impl Iterator<Item = Dyadic> + '_ {
        std::iter::once(self.constant)
            .chain(self.linear.iter().copied())
            .chain(self.quadratic.values().copied())
            .chain(self.cubic.values().copied())
    }

    /// The scale exponent `E` of the rendered `2^E u`: the largest weight
    /// exponent (so `8u` for 3-clauses even after cancellations), raised if a
    /// coefficient needs more.
    pub fn scale_exponent(&self) -> u32 {
        self.coefficients().map(Dyadic::exponent).chain([self.weight_exponent]).max().unwrap_or(0)
    }

    /// Integer coefficients of `2^E u` with 1-based indices.
    pub fn scaled(&self) -> ScaledForm {
        let e = self.scale_exponent();
        ScaledForm {
            scale: 1i128 << e,
            constant: self.constant.scaled_numerator(e),
            linear: self.linear.iter().map(|v| v.scaled_numerator(e)).collect(),
            quadratic: self
                .quadratic
                .iter()
                .map(|(&(i, j), v)| ScaledTerm { vars: vec![i + 1, j + 1], value: v.scaled_numerator(e) })
                .collect(),
            cubic: self
                .cubic
                .iter()
                .map(|(&(i, j, k), v)| ScaledTerm { vars: vec![i + 1, j + 1, k + 1], value: v.scaled_numerator(e) })
                .collect(),
        }
    }

    /// The scaled polynomial, e.g. `8u = 12 + x₁ − 2x₂ …`.
    pub fn render(&self, style: Style) -> String {
        self.render_labeled(style, "u")
    }

    pub fn render_labeled(&self, style: Style, label: &str) -> String {
        let sc = self.scaled();
        let mut terms: Vec<(i128, Vec<usize>)> = Vec::new();
        terms.push((sc.constant, vec![]));
        for (j, &l) in sc.linear.iter().enumerate() {
            terms.push((-l, vec![j + 1]));
        }
        terms.extend(sc.quadratic.iter().map(|t| (t.value, t.vars.clone())));
        terms.extend(sc.cubic.iter().map(|t| (-t.value, t.vars.clone())));
        terms.retain(|(c, _)| *c != 0);

        let minus = match style {
            Style::Ascii => "-",
            Style::Unicode => "\u{2212}",
        };
        let mut out = String::new();
        if sc.scale != 1 {
            write!(out, "{}", sc.scale).unwrap();
        }
        write!(out, "{label} = ").unwrap();
        if terms.is_empty() {
            out.push('0');
        }
        for (t, (c, vars)) in terms.iter().enumerate() {
            match (t, *c < 0) {
                (0, true) => out.push_str(minus),
                (0, false) => {}
                (_, true) => write!(out, " {minus} ").unwrap(),
                (_, false) => out.push_str(" + "),
            }
            let mag = c.unsigned_abs();
            if mag != 1 || vars.is_empty() {
                write!(out, "{mag}").unwrap();
            }
            for &v in vars {
                out.push('x');
                out.push_str(&style.index(v));
            }
        }
        out
    }
}

/// Integer image of a [`PBForm`] scaled by `scale`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaledForm {
    pub scale: i128,
    #[serde(rename = "C")]
    pub constant: i128,
    #[serde(rename = "lambda")]
    pub linear: Vec<i128>,
    #[serde(rename = "mu")]
    pub quadratic: Vec<ScaledTerm>,
    #[serde(rename = "nu")]
    pub cubic: Vec<ScaledTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaledTerm {
    pub vars: Vec<usize>,
    pub value: i128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    Ascii,
    /// Subscript indices and a true minus sign.
    #[default]
    Unicode,
}

impl Style {
    fn index(self, v: usize) -> String {
        match self {
            Style::Ascii => v.to_string(),
            Style::Unicode => v
                .to_string()
                .chars()
                .map(|c| char::from_u32(0x2080 + c.to_digit(10).unwrap()).unwrap())
                .collect(),
        }
    }
}

pub fn eval_u(p: &PBForm, x: &Assignment) -> Result<Dyadic, PbError> {
    p.eval(x)
}

/// Number of rows with no literal satisfied by `x`.
pub fn unsat_count_direct(s: &Scheme, x: &Assignment) -> Result<usize, SchemeError> {
    s.evaluate(x)?;
    Ok((0..s.m()).filter(|&i| !s.row_satisfied(i, x)).count())
}

/// `u(x)` with unit weights by direct scan: `Σ 2^k_i` over violated rows.
pub fn unit_weight_direct(s: &Scheme, x: &Assignment) -> Result<u128, SchemeError> {
    s.evaluate(x)?;
    Ok((0..s.m()).filter(|&i| !s.row_satisfied(i, x)).map(|i| 1u128 << s.row_len(i)).sum())
}

/// Which literals of a 3-clause are negated to form its adverse-parity copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ExtendStrategy {
    #[default]
    FlipFirst,
    FlipSecond,
    FlipThird,
    FlipAll,
}

impl ExtendStrategy {
    pub const ALL: [ExtendStrategy; 4] =
        [ExtendStrategy::FlipFirst, ExtendStrategy::FlipSecond, ExtendStrategy::FlipThird, ExtendStrategy::FlipAll];

    fn flips(self, t: usize) -> bool {
        match self {
            ExtendStrategy::FlipFirst => t == 0,
            ExtendStrategy::FlipSecond => t == 1,
            ExtendStrategy::FlipThird => t == 2,
            ExtendStrategy::FlipAll => true,
        }
    }
}

fn adverse(row: &[Fill], strategy: ExtendStrategy) -> Vec<Fill> {
    let mut out = row.to_vec();
    for (t, f) in out.iter_mut().filter(|f| f.is_present()).enumerate() {
        if strategy.flips(t) {
            *f = f.flipped();
        }
    }
    out
}

/// Appends, for every 3-literal row in order, a copy with an odd number of
/// literals negated (chosen by `strategy`, counting literals left to right),
/// so that every cubic coefficient cancels.
pub fn extend(s: &Scheme, strategy: ExtendStrategy) -> Result<Scheme, PbError> {
    require_3sat(s)?;
    let per_clause = vec![strategy; three_clauses(s).len()];
    extend_with(s, &per_clause)
}

fn three_clauses(s: &Scheme) -> Vec<usize> {
    (0..s.m()).filter(|&i| s.row_len(i) == 3).collect()
}

/// Like [`extend`] with a separate strategy for each 3-literal row.
pub fn extend_with(s: &Scheme, strategies: &[ExtendStrategy]) -> Result<Scheme, PbError> {
    require_3sat(s)?;
    let threes = three_clauses(s);
    if strategies.len() != threes.len() {
        return Err(PbError::WeightCount { expected: threes.len(), got: strategies.len() });
    }
    let mut rows = s.rows().to_vec();
    for (&i, &st) in threes.iter().zip(strategies) {
        rows.push(adverse(&s.rows()[i], st));
    }
    Ok(Scheme::new(s.n(), rows)?)
}

/// Iterates over every combination of per-clause strategies (`4^t` of them).
pub fn extensions(s: &Scheme) -> Result<impl Iterator<Item = (Vec<ExtendStrategy>, Scheme)> + '_, PbError> {
    require_3sat(s)?;
    let t = three_clauses(s).len();
    let count = 4u128.checked_pow(t as u32).unwrap_or(u128::MAX);
    Ok((0..count).map(move |mut code| {
        let st: Vec<ExtendStrategy> = (0..t)
            .map(|_| {
                let v = ExtendStrategy::ALL[(code % 4) as usize];
                code /= 4;
                v
            })
            .collect();
        let e = extend_with(s, &st).expect("validated above");
        (st, e)
    }))
}

pub const DEFAULT_MAX_EXTENSIONS: u128 = 1 << 16;

/// The first extension (in [`extensions`] order) that the brute-force oracle
/// finds satisfiable. Any solution of it solves `s`.
pub fn find_satisfiable_extension(
    s: &Scheme,
    max_candidates: u128,
) -> Result<(Vec<ExtendStrategy>, Scheme), PbError> {
    let t = three_clauses(s).len();
    let count = 4u128.checked_pow(t as u32).unwrap_or(u128::MAX);
    if count > max_candidates {
        return Err(PbError::TooManyExtensions { count, limit: max_candidates });
    }
    for (st, e) in extensions(s)? {
        if crate::oracle::is_satisfiable(&e)? {
            return Ok((st, e));
        }
    }
    Err(PbError::NoSatisfiableExtension)
}
