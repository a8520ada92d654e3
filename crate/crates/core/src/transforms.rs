//! Formula transformations on schemes.
//!
//! Column *deletion* renumbers the remaining variables; operations that need
//! to talk about the original variables afterwards (fact trails, elimination
//! orders) carry a column map internally and report original indices.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::scheme::{rows_orthogonal, Fill, Scheme, SchemeError, Status};

/// Upper bound on `n` for operations that materialize all `2^n` primes.
pub const MAX_BLOW_UP_VARS: usize = 20;

/// Default row cap for elimination chains.
pub const DEFAULT_MAX_ROWS: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("cell ({row}, {col}) is not absent")]
    NotAbsent { row: usize, col: usize },
    #[error("full blow-up needs n <= {limit}, scheme has {n} variables")]
    TooManyVariables { n: usize, limit: usize },
    #[error("invalid variable order: {0}")]
    Order(String),
    #[error("row {row} does not contain {expected} at column {col}")]
    NotResolvable { row: usize, col: usize, expected: &'static str },
    #[error("intermediate scheme exceeded {limit} rows")]
    RowLimit { limit: usize },
    #[error("invalid permutation of length {len}")]
    Permutation { len: usize },
}

/// SAT / UNSAT answer of a complete procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Satisfiability {
    #[serde(rename = "SAT")]
    Sat,
    #[serde(rename = "UNSAT")]
    Unsat,
}

impl Satisfiability {
    pub fn is_sat(self) -> bool {
        self == Satisfiability::Sat
    }
}

/// A set of columns whose polarities are swapped.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FlipMask {
    cols: Vec<bool>,
}

impl FlipMask {
    /// Mask from 0-based columns of an `n`-variable scheme.
    pub fn new(cols: &[usize], n: usize) -> Result<Self, SchemeError> {
        let mut mask = vec![false; n];
        for &c in cols {
            *mask.get_mut(c).ok_or(SchemeError::ColumnIndex { index: c, n })? = true;
        }
        Ok(FlipMask { cols: mask })
    }

    /// Mask `i` of the `2^n` masks of the flip class: bit `j` flips column `j`.
    pub fn from_code(code: u64, n: usize) -> Self {
        FlipMask { cols: (0..n).map(|j| code >> j & 1 == 1).collect() }
    }

    pub fn contains(&self, col: usize) -> bool {
        self.cols.get(col).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.iter().all(|c| !c)
    }
}

/// Swaps `x ↔ x̄` in every masked column.
pub fn flip(s: &Scheme, mask: &FlipMask) -> Result<Scheme, TransformError> {
    if mask.len() != s.n() {
        return Err(SchemeError::ColumnIndex { index: mask.len(), n: s.n() }.into());
    }
    let rows = s
        .rows()
        .iter()
        .map(|r| r.iter().enumerate().map(|(j, &f)| if mask.contains(j) { f.flipped() } else { f }).collect())
        .collect();
    Ok(Scheme::from_parts(s.n(), rows))
}

fn check_permutation(perm: &[usize], len: usize) -> Result<(), TransformError> {
    let mut seen = vec![false; len];
    if perm.len() != len {
        return Err(TransformError::Permutation { len });
    }
    for &p in perm {
        if p >= len || std::mem::replace(&mut seen[p], true) {
            return Err(TransformError::Permutation { len });
        }
    }
    Ok(())
}

/// Row `i` of the result is row `perm[i]` of `s`.
pub fn permute_rows(s: &Scheme, perm: &[usize]) -> Result<Scheme, TransformError> {
    check_permutation(perm, s.m())?;
    Ok(Scheme::from_parts(s.n(), perm.iter().map(|&p| s.rows()[p].clone()).collect()))
}

/// Column `j` of the result is column `perm[j]` of `s`.
pub fn permute_columns(s: &Scheme, perm: &[usize]) -> Result<Scheme, TransformError> {
    check_permutation(perm, s.n())?;
    let rows = s.rows().iter().map(|r| perm.iter().map(|&p| r[p]).collect()).collect();
    Ok(Scheme::from_parts(s.n(), rows))
}

/// Replaces row `row` by two copies carrying `x` and `x̄` at `col`.
pub fn blow_up(s: &Scheme, row: usize, col: usize) -> Result<Scheme, TransformError> {
    if s.cell(row, col)? != Fill::Absent {
        return Err(TransformError::NotAbsent { row, col });
    }
    let mut rows = s.rows().to_vec();
    let mut neg = rows[row].clone();
    rows[row][col] = Fill::Positive;
    neg[col] = Fill::Negative;
    rows.insert(row + 1, neg);
    Ok(Scheme::from_parts(s.n(), rows))
}

/// Blows every row up to primes (rows without absent cells). Duplicates are
/// kept.
pub fn full_blow_up(s: &Scheme) -> Result<Scheme, TransformError> {
    if s.n() > MAX_BLOW_UP_VARS {
        return Err(TransformError::TooManyVariables { n: s.n(), limit: MAX_BLOW_UP_VARS });
    }
    let mut rows = Vec::new();
    for row in s.rows() {
        let free: Vec<usize> = (0..s.n()).filter(|&j| !row[j].is_present()).collect();
        for code in 0u64..1 << free.len() {
            let mut r = row.clone();
            for (b, &j) in free.iter().enumerate() {
                r[j] = Fill::for_value(code >> b & 1 == 1);
            }
            rows.push(r);
        }
    }
    Ok(Scheme::from_parts(s.n(), rows))
}

fn mergeable(a: &[Fill], b: &[Fill]) -> Option<usize> {
    let mut at = None;
    for (j, (x, y)) in a.iter().zip(b).enumerate() {
        if x == y {
            continue;
        }
        if x.value() * y.value() != -1 || at.is_some() {
            return None;
        }
        at = Some(j);
    }
    at
}

/// Merges `R x S` / `R x̄ S` row pairs into `R 0 S` until no pair is left or
/// a contradiction pattern appears.
pub fn shrink(s: &Scheme) -> Scheme {
    let mut rows = s.rows().to_vec();
    loop {
        if Scheme::from_parts(s.n(), rows.clone()).status() == Status::Contradiction {
            break;
        }
        let found = (0..rows.len())
            .flat_map(|i| (i + 1..rows.len()).map(move |j| (i, j)))
            .find_map(|(i, j)| mergeable(&rows[i], &rows[j]).map(|c| (i, j, c)));
        match found {
            Some((i, j, c)) => {
                rows[i][c] = Fill::Absent;
                rows.remove(j);
            }
            None => break,
        }
    }
    Scheme::from_parts(s.n(), rows)
}

fn subsumes(a: &[Fill], b: &[Fill]) -> bool {
    a.iter().zip(b).all(|(x, y)| !x.is_present() || x == y)
}

/// Removes every row whose literal set contains another row's; of identical
/// rows the first is kept.
pub fn drop_subsumed(s: &Scheme) -> Scheme {
    let rows = s.rows();
    let mut kept: Vec<usize> = Vec::new();
    for i in 0..rows.len() {
        if kept.iter().any(|&k| subsumes(&rows[k], &rows[i])) {
            continue;
        }
        kept.retain(|&k| !subsumes(&rows[i], &rows[k]));
        kept.push(i);
    }
    kept.sort_unstable();
    Scheme::from_parts(s.n(), kept.into_iter().map(|i| rows[i].clone()).collect())
}

/// Tracks which original variable each current column stands for.
#[derive(Debug, Clone)]
pub(crate) struct Columns {
    rows: Vec<Vec<Fill>>,
    vars: Vec<usize>,
}

impl Columns {
    pub(crate) fn new(s: &Scheme) -> Self {
        Columns { rows: s.rows().to_vec(), vars: (0..s.n()).collect() }
    }

    pub(crate) fn position(&self, var: usize) -> Option<usize> {
        self.vars.iter().position(|&v| v == var)
    }

    pub(crate) fn delete(&mut self, col: usize) {
        for r in &mut self.rows {
            r.remove(col);
        }
        self.vars.remove(col);
    }

    pub(crate) fn scheme(&self) -> Scheme {
        Scheme::from_parts(self.vars.len(), self.rows.clone())
    }

    pub(crate) fn set(&mut self, s: Scheme) {
        debug_assert_eq!(s.n(), self.vars.len());
        self.rows = s.into_rows();
    }
}

/// Deletes, to fixpoint, every nonempty single-polarity column together with
/// the rows it occurs in. Returns the forced values by original column.
pub fn remove_pure_columns(s: &Scheme) -> (Scheme, Vec<(usize, bool)>) {
    let mut cols = Columns::new(s);
    let mut forced = Vec::new();
    loop {
        let n = cols.vars.len();
        let pure = (0..n).find_map(|j| {
            let mut pos = false;
            let mut neg = false;
            for r in &cols.rows {
                match r[j] {
                    Fill::Positive => pos = true,
                    Fill::Negative => neg = true,
                    Fill::Absent => {}
                }
            }
            (pos != neg).then_some((j, pos))
        });
        let Some((j, value)) = pure else { break };
        forced.push((cols.vars[j], value));
        cols.rows.retain(|r| !r[j].is_present());
        cols.delete(j);
    }
    (cols.scheme(), forced)
}

/// Assigns `value` to column `var` but keeps the (now all-absent) column:
/// satisfied rows are dropped and the falsified literal is erased from the
/// others.
pub fn restrict(s: &Scheme, var: usize, value: bool) -> Result<Scheme, TransformError> {
    if var >= s.n() {
        return Err(SchemeError::ColumnIndex { index: var, n: s.n() }.into());
    }
    Ok(restrict_unchecked(s, var, value))
}

pub(crate) fn restrict_unchecked(s: &Scheme, var: usize, value: bool) -> Scheme {
    let rows = s
        .rows()
        .iter()
        .filter(|r| !r[var].satisfied_by(value))
        .map(|r| {
            let mut r = r.clone();
            r[var] = Fill::Absent;
            r
        })
        .collect();
    Scheme::from_parts(s.n(), rows)
}

/// Assigns `value` to column `var` and deletes the column.
pub fn assign(s: &Scheme, var: usize, value: bool) -> Result<Scheme, TransformError> {
    let mut cols = Columns::new(&restrict(s, var, value)?);
    cols.delete(var);
    Ok(cols.scheme())
}

/// Result of [`accept_facts`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactsOutcome {
    /// The simplified scheme, assigned columns deleted.
    pub scheme: Scheme,
    /// `(original column, value)` in the order applied.
    pub trail: Vec<(usize, bool)>,
}

/// Repeatedly assigns the first unit row's literal until no unit rows remain
/// or a terminal status appears.
pub fn accept_facts(s: &Scheme) -> FactsOutcome {
    let mut cur = s.clone();
    let mut trail = Vec::new();
    while !cur.status().is_terminal() {
        let Some(i) = (0..cur.m()).find(|&i| cur.row_len(i) == 1) else { break };
        let (j, f) = cur.literals(i).next().unwrap();
        let value = f == Fill::Positive;
        cur = restrict_unchecked(&cur, j, value);
        trail.push((j, value));
    }
    let mut cols = Columns::new(&cur);
    let mut assigned: Vec<usize> = trail.iter().map(|&(j, _)| j).collect();
    assigned.sort_unstable_by(|a, b| b.cmp(a));
    for j in assigned {
        cols.delete(j);
    }
    FactsOutcome { scheme: cols.scheme(), trail }
}

/// Rows partitioned at a split column and their recombination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitResult {
    /// Rows that held `x` at the split column, column removed.
    pub positive: Vec<Vec<Fill>>,
    /// Rows that held `x̄`, column removed.
    pub negative: Vec<Vec<Fill>>,
    /// Rows without the variable, column removed.
    pub rest: Vec<Vec<Fill>>,
    /// Products `Y_i ∨ Z_j` of non-orthogonal pairs (deduplicated), then `rest`.
    pub scheme: Scheme,
}

fn without(r: &[Fill], col: usize) -> Vec<Fill> {
    r.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, &f)| f).collect()
}

fn disjoin(a: &[Fill], b: &[Fill]) -> Vec<Fill> {
    a.iter().zip(b).map(|(&x, &y)| if x.is_present() { x } else { y }).collect()
}

/// Eliminates column `var`: the result has `n − 1` columns and is
/// satisfiable iff `s` is.
pub fn split(s: &Scheme, var: usize) -> Result<SplitResult, TransformError> {
    if var >= s.n() {
        return Err(SchemeError::ColumnIndex { index: var, n: s.n() }.into());
    }
    let (mut positive, mut negative, mut rest) = (Vec::new(), Vec::new(), Vec::new());
    for r in s.rows() {
        let target = match r[var] {
            Fill::Positive => &mut positive,
            Fill::Negative => &mut negative,
            Fill::Absent => &mut rest,
        };
        target.push(without(r, var));
    }
    let mut seen = HashSet::new();
    let mut rows = Vec::new();
    for y in &positive {
        for z in &negative {
            if rows_orthogonal(y, z) {
                continue;
            }
            let p = disjoin(y, z);
            if seen.insert(p.clone()) {
                rows.push(p);
            }
        }
    }
    rows.extend(rest.iter().cloned());
    let scheme = Scheme::from_parts(s.n() - 1, rows);
    Ok(SplitResult { positive, negative, rest, scheme })
}

/// Result of a resolution step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub scheme: Scheme,
    /// True when the step was an exact equivalence (one positive and one
    /// negative occurrence, or a pure or absent variable).
    pub conclusive: bool,
}

/// Resolves on column `var`. With exactly one positive and one negative row
/// the pair is replaced by its resolvent; otherwise every positive/negative
/// pair is replaced by its resolvent. The column is deleted unless the
/// variable does not occur, in which case the scheme is returned unchanged.
pub fn resolve(s: &Scheme, var: usize) -> Result<Resolution, TransformError> {
    if var >= s.n() {
        return Err(SchemeError::ColumnIndex { index: var, n: s.n() }.into());
    }
    if s.column_occurrences(var) == 0 {
        return Ok(Resolution { scheme: s.clone(), conclusive: true });
    }
    let sp = split(s, var)?;
    let conclusive = sp.positive.len() * sp.negative.len() <= 1;
    Ok(Resolution { scheme: sp.scheme, conclusive })
}

/// One-pair resolution: rows `pos_row` (holding `x` at `var`) and `neg_row`
/// (holding `x̄`) are replaced by their resolvent, which takes the place of
/// the lower-indexed row. Other occurrences of the variable stay, and the
/// column is kept so column indices remain stable. A tautological resolvent
/// is dropped.
pub fn resolve_pair(s: &Scheme, var: usize, pos_row: usize, neg_row: usize) -> Result<Resolution, TransformError> {
    if s.cell(pos_row, var)? != Fill::Positive {
        return Err(TransformError::NotResolvable { row: pos_row, col: var, expected: "x" });
    }
    if s.cell(neg_row, var)? != Fill::Negative {
        return Err(TransformError::NotResolvable { row: neg_row, col: var, expected: "x\u{304}" });
    }
    let conclusive = s.column_occurrences(var) == 2;
    let mut rows = s.rows().to_vec();
    let (a, b) = (&rows[pos_row], &rows[neg_row]);
    let mut a = a.clone();
    let mut b = b.clone();
    a[var] = Fill::Absent;
    b[var] = Fill::Absent;
    let resolvent = (!rows_orthogonal(&a, &b)).then(|| disjoin(&a, &b));
    let (lo, hi) = (pos_row.min(neg_row), pos_row.max(neg_row));
    rows.remove(hi);
    match resolvent {
        Some(r) => rows[lo] = r,
        None => {
            rows.remove(lo);
        }
    }
    Ok(Resolution { scheme: Scheme::from_parts(s.n(), rows), conclusive })
}

/// Outcome of successive splitting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elimination {
    pub verdict: Satisfiability,
    /// The scheme after each step, starting with the input.
    pub chain: Vec<Scheme>,
}

fn check_order(order: &[usize], n: usize) -> Result<(), TransformError> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(TransformError::Order(format!("expected a permutation of {n} variables, got {} entries", order.len())));
    }
    for &v in order {
        if v >= n {
            return Err(TransformError::Order(format!("variable {} out of range", v + 1)));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(TransformError::Order(format!("variable {} repeated", v + 1)));
        }
    }
    Ok(())
}

pub(crate) fn order_or_default(order: Option<&[usize]>, n: usize) -> Result<Vec<usize>, TransformError> {
    match order {
        Some(o) => {
            check_order(o, n)?;
            Ok(o.to_vec())
        }
        None => Ok((0..n).collect()),
    }
}

fn terminal_verdict(s: &Scheme) -> Option<Satisfiability> {
    if s.m() == 0 {
        return Some(Satisfiability::Sat);
    }
    match s.status() {
        Status::Open => None,
        Status::Confirmation => Some(Satisfiability::Sat),
        Status::Contradiction | Status::EmptyClause => Some(Satisfiability::Unsat),
    }
}

/// Splits on every variable in `order` (ascending by default), simplifying
/// with [`drop_subsumed`] and [`shrink`] after each step, until the scheme is
/// empty (SAT) or unsatisfiable by pattern (UNSAT).
pub fn metavariable_eliminate(s: &Scheme, order: Option<&[usize]>) -> Result<Elimination, TransformError> {
    metavariable_eliminate_with_limit(s, order, DEFAULT_MAX_ROWS)
}

pub fn metavariable_eliminate_with_limit(
    s: &Scheme,
    order: Option<&[usize]>,
    max_rows: usize,
) -> Result<Elimination, TransformError> {
    let order = order_or_default(order, s.n())?;
    let mut cols = Columns::new(s);
    let mut chain = vec![s.clone()];
    for &var in &order {
        let cur = cols.scheme();
        if let Some(verdict) = terminal_verdict(&cur) {
            return Ok(Elimination { verdict, chain });
        }
        let col = cols.position(var).expect("variable still present");
        let next = split(&cur, col)?.scheme;
        if next.m() > max_rows {
            return Err(TransformError::RowLimit { limit: max_rows });
        }
        let next = shrink(&drop_subsumed(&next));
        cols.vars.remove(col);
        cols.set(next.clone());
        chain.push(next);
    }
    let last = cols.scheme();
    let verdict = terminal_verdict(&last).unwrap_or_else(|| {
        // every column gone: only all-absent rows can remain
        if last.m() == 0 {
            Satisfiability::Sat
        } else {
            Satisfiability::Unsat
        }
    });
    Ok(Elimination { verdict, chain })
}

/// Replaces every variable with more than three occurrences by one copy per
/// occurrence, chained by the cyclic implications `ȳ_t ∨ y_{t+1}`. The first
/// copy keeps the original column; the others are appended. Equisatisfiable
/// with `s`; model counts are not preserved.
pub fn reduce_read3(s: &Scheme) -> Scheme {
    let heavy: Vec<(usize, Vec<usize>)> = (0..s.n())
        .filter_map(|j| {
            let occ: Vec<usize> = (0..s.m()).filter(|&i| s.rows()[i][j].is_present()).collect();
            (occ.len() > 3).then_some((j, occ))
        })
        .collect();
    if heavy.is_empty() {
        return s.clone();
    }
    let extra: usize = heavy.iter().map(|(_, occ)| occ.len() - 1).sum();
    let n = s.n() + extra;
    let mut rows: Vec<Vec<Fill>> = s
        .rows()
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.resize(n, Fill::Absent);
            r
        })
        .collect();
    let mut next_col = s.n();
    for (j, occ) in heavy {
        let copies: Vec<usize> = std::iter::once(j)
            .chain((1..occ.len()).map(|_| {
                next_col += 1;
                next_col - 1
            }))
            .collect();
        for (t, &i) in occ.iter().enumerate().skip(1) {
            rows[i][copies[t]] = rows[i][j];
            rows[i][j] = Fill::Absent;
        }
        let r = copies.len();
        for t in 0..r {
            let mut link = vec![Fill::Absent; n];
            link[copies[t]] = Fill::Negative;
            link[copies[(t + 1) % r]] = Fill::Positive;
            rows.push(link);
        }
    }
    Scheme::from_parts(n, rows)
}
