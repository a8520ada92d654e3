//! The matrix-scheme data model: rows are clauses, columns are variables and
//! each cell holds a [`Fill`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;

/// One cell of a scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fill {
    /// The variable occurs positively (`x`).
    Positive,
    /// The variable occurs negated (`x̄`).
    Negative,
    /// The variable does not occur (`0`).
    Absent,
}

impl Fill {
    /// Integer image `f ∈ {+1, -1, 0}`.
    pub fn value(self) -> i8 {
        match self {
            Fill::Positive => 1,
            Fill::Negative => -1,
            Fill::Absent => 0,
        }
    }

    pub fn from_value(v: i8) -> Option<Fill> {
        match v {
            1 => Some(Fill::Positive),
            -1 => Some(Fill::Negative),
            0 => Some(Fill::Absent),
            _ => None,
        }
    }

    pub fn is_present(self) -> bool {
        self != Fill::Absent
    }

    /// `x ↔ x̄`; `Absent` stays `Absent`.
    pub fn flipped(self) -> Fill {
        match self {
            Fill::Positive => Fill::Negative,
            Fill::Negative => Fill::Positive,
            Fill::Absent => Fill::Absent,
        }
    }

    /// The literal polarity that satisfies this fill.
    pub fn satisfied_by(self, value: bool) -> bool {
        match self {
            Fill::Positive => value,
            Fill::Negative => !value,
            Fill::Absent => false,
        }
    }

    /// The fill that is satisfied when the variable takes `value`.
    pub fn for_value(value: bool) -> Fill {
        if value {
            Fill::Positive
        } else {
            Fill::Negative
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemeError {
    #[error("row {row} has {found} cells, expected {expected}")]
    RowLength { row: usize, expected: usize, found: usize },
    #[error("row {index} out of range (scheme has {m} rows)")]
    RowIndex { index: usize, m: usize },
    #[error("column {index} out of range (scheme has {n} columns)")]
    ColumnIndex { index: usize, n: usize },
    #[error("assignment has length {found}, scheme has {expected} variables")]
    AssignmentLength { expected: usize, found: usize },
    #[error("assignment entries must be +1 or -1, got {0}")]
    AssignmentValue(i64),
    #[error("clause {clause} contains both {var} and -{var}")]
    Tautology { clause: usize, var: usize },
    #[error("literal {literal} out of range for {n} variables")]
    Literal { literal: i64, n: usize },
}

/// A CNF formula as an `m × n` grid of fills.
///
/// Indices are 0-based in the API; user-facing text is 1-based.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scheme {
    n: usize,
    rows: Vec<Vec<Fill>>,
}

impl Scheme {
    pub fn new(n: usize, rows: Vec<Vec<Fill>>) -> Result<Self, SchemeError> {
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(SchemeError::RowLength { row: i, expected: n, found: r.len() });
            }
        }
        Ok(Scheme { n, rows })
    }

    pub fn empty(n: usize) -> Self {
        Scheme { n, rows: Vec::new() }
    }

    /// Builds a scheme from DIMACS-style signed 1-based literals. Duplicate
    /// literals collapse; a clause holding `v` and `-v` is rejected.
    pub fn from_clauses<C: AsRef<[i64]>>(n: usize, clauses: &[C]) -> Result<Self, SchemeError> {
        let rows = clauses
            .iter()
            .enumerate()
            .map(|(ci, c)| clause_row(n, ci, c.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Scheme { n, rows })
    }

    /// Number of clauses.
    pub fn m(&self) -> usize {
        self.rows.len()
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<Fill>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> Result<&[Fill], SchemeError> {
        self.rows.get(i).map(Vec::as_slice).ok_or(SchemeError::RowIndex { index: i, m: self.m() })
    }

    pub fn cell(&self, i: usize, j: usize) -> Result<Fill, SchemeError> {
        let row = self.row(i)?;
        row.get(j).copied().ok_or(SchemeError::ColumnIndex { index: j, n: self.n })
    }

    pub fn into_rows(self) -> Vec<Vec<Fill>> {
        self.rows
    }

    pub(crate) fn from_parts(n: usize, rows: Vec<Vec<Fill>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == n));
        Scheme { n, rows }
    }

    /// Number of literals `k_i` in row `i`.
    pub fn row_len(&self, i: usize) -> usize {
        self.rows[i].iter().filter(|f| f.is_present()).count()
    }

    /// Largest clause size; 0 for an empty scheme.
    pub fn max_row_len(&self) -> usize {
        (0..self.m()).map(|i| self.row_len(i)).max().unwrap_or(0)
    }

    /// `(column, fill)` pairs of the present literals of row `i`.
    pub fn literals(&self, i: usize) -> impl Iterator<Item = (usize, Fill)> + '_ {
        self.rows[i].iter().copied().enumerate().filter(|(_, f)| f.is_present())
    }

    /// Non-absent fills in column `j`.
    pub fn column_occurrences(&self, j: usize) -> usize {
        self.rows.iter().filter(|r| r[j].is_present()).count()
    }

    /// Clauses as DIMACS-style signed 1-based literals.
    pub fn clauses(&self) -> Vec<Vec<i64>> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter_map(|(j, f)| match f {
                        Fill::Positive => Some(j as i64 + 1),
                        Fill::Negative => Some(-(j as i64 + 1)),
                        Fill::Absent => None,
                    })
                    .collect()
            })
            .collect()
    }

    pub fn is_empty_clause(&self, i: usize) -> bool {
        self.rows[i].iter().all(|f| !f.is_present())
    }

    pub fn has_empty_clause(&self) -> bool {
        (0..self.m()).any(|i| self.is_empty_clause(i))
    }

    /// Every clause has at most three literals.
    pub fn is_3sat(&self) -> bool {
        self.max_row_len() <= 3
    }

    fn check_assignment(&self, x: &Assignment) -> Result<(), SchemeError> {
        if x.len() != self.n {
            return Err(SchemeError::AssignmentLength { expected: self.n, found: x.len() });
        }
        Ok(())
    }

    /// Whether row `i` contains a literal satisfied by `x` (length unchecked).
    pub(crate) fn row_satisfied(&self, i: usize, x: &Assignment) -> bool {
        self.rows[i].iter().zip(x.signs()).any(|(f, &s)| f.value() != 0 && f.value() == s)
    }

    /// Clause-wise truth value of the formula under `x`.
    pub fn evaluate(&self, x: &Assignment) -> Result<bool, SchemeError> {
        self.check_assignment(x)?;
        Ok((0..self.m()).all(|i| self.row_satisfied(i, x)))
    }

    /// Truth value through the product `∏ [1 − c_i g_i(x)]` in exact arithmetic,
    /// with `g_i = ∏_j (1 − f_ij x_j)` and `c_i = ∏_j (1 − f_ij²/2)`.
    /// Always 0 or 1.
    pub fn evaluate_product(&self, x: &Assignment) -> Result<Dyadic, SchemeError> {
        self.check_assignment(x)?;
        let half = Dyadic::pow2_neg(1);
        let mut t = Dyadic::ONE;
        for row in &self.rows {
            let mut c = Dyadic::ONE;
            let mut g = Dyadic::ONE;
            for (f, &xj) in row.iter().zip(x.signs()) {
                let f = f.value() as i128;
                c = c * (Dyadic::ONE - half * (f * f));
                g = g * Dyadic::from_int(1 - f * xj as i128);
            }
            t = t * (Dyadic::ONE - c * g);
        }
        Ok(t)
    }

    /// Rows `i` and `j` hold complementary fills in some column, so their
    /// disjunction is a tautology. A row compared with itself is `false`.
    pub fn orthogonal(&self, i: usize, j: usize) -> Result<bool, SchemeError> {
        let a = self.row(i)?;
        let b = self.row(j)?;
        if i == j {
            return Ok(false);
        }
        Ok(rows_orthogonal(a, b))
    }

    /// Terminal pattern of the scheme, if any.
    pub fn status(&self) -> Status {
        if self.m() == 1 && self.row_len(0) == 1 {
            return Status::Confirmation;
        }
        let units: Vec<(usize, Fill)> = (0..self.m())
            .filter(|&i| self.row_len(i) == 1)
            .map(|i| self.literals(i).next().unwrap())
            .collect();
        let mut seen = std::collections::HashSet::new();
        for &(j, f) in &units {
            if seen.contains(&(j, f.flipped())) {
                return Status::Contradiction;
            }
            seen.insert((j, f));
        }
        if self.has_empty_clause() {
            return Status::EmptyClause;
        }
        Status::Open
    }
}

pub(crate) fn rows_orthogonal(a: &[Fill], b: &[Fill]) -> bool {
    a.iter().zip(b).any(|(x, y)| x.value() * y.value() == -1)
}

fn clause_row(n: usize, ci: usize, lits: &[i64]) -> Result<Vec<Fill>, SchemeError> {
    let mut row = vec![Fill::Absent; n];
    for &l in lits {
        let v = l.unsigned_abs() as usize;
        if l == 0 || v > n {
            return Err(SchemeError::Literal { literal: l, n });
        }
        let f = if l > 0 { Fill::Positive } else { Fill::Negative };
        match row[v - 1] {
            Fill::Absent => row[v - 1] = f,
            existing if existing == f => {}
            _ => return Err(SchemeError::Tautology { clause: ci + 1, var: v }),
        }
    }
    Ok(row)
}

impl fmt::Debug for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Scheme {}x{}", self.m(), self.n)?;
        f.write_str(&crate::format::emit_scheme_text(self))
    }
}

/// Terminal patterns reached while simplifying a scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Open,
    /// A single row with a single literal: satisfiable.
    Confirmation,
    /// Two unit rows with complementary literals: unsatisfiable.
    Contradiction,
    /// An all-absent row: unsatisfiable.
    EmptyClause,
}

impl Status {
    pub fn is_unsat(self) -> bool {
        matches!(self, Status::Contradiction | Status::EmptyClause)
    }

    pub fn is_terminal(self) -> bool {
        self != Status::Open
    }
}

/// A truth assignment `x ∈ {-1, +1}^n`; `+1` is true.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Assignment(Vec<i8>);

impl Assignment {
    pub fn from_signs(signs: Vec<i8>) -> Result<Self, SchemeError> {
        if let Some(&bad) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(SchemeError::AssignmentValue(bad as i64));
        }
        Ok(Assignment(signs))
    }

    pub fn from_bools(values: &[bool]) -> Self {
        Assignment(values.iter().map(|&b| if b { 1 } else { -1 }).collect())
    }

    pub fn all_true(n: usize) -> Self {
        Assignment(vec![1; n])
    }

    pub fn all_false(n: usize) -> Self {
        Assignment(vec![-1; n])
    }

    /// Bit `j` of `code` set means `x_j = +1`.
    pub fn from_code(code: u64, n: usize) -> Self {
        Assignment((0..n).map(|j| if code >> j & 1 == 1 { 1 } else { -1 }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn sign(&self, j: usize) -> i8 {
        self.0[j]
    }

    pub fn value(&self, j: usize) -> bool {
        self.0[j] == 1
    }

    pub fn set(&mut self, j: usize, value: bool) {
        self.0[j] = if value { 1 } else { -1 };
    }

    pub fn flip(&mut self, j: usize) {
        self.0[j] = -self.0[j];
    }

    pub fn to_bools(&self) -> Vec<bool> {
        self.0.iter().map(|&s| s == 1).collect()
    }

    /// Iterates over all `2^n` assignments in binary order of [`Assignment::from_code`].
    pub fn all(n: usize) -> impl Iterator<Item = Assignment> {
        assert!(n < 64, "cannot enumerate 2^{n} assignments");
        (0..1u64 << n).map(move |c| Assignment::from_code(c, n))
    }
}
