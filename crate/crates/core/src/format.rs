//! Readers and writers: DIMACS CNF, the `+ - 0` scheme text grid and a JSON
//! scheme document.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::scheme::{Fill, Scheme, SchemeError, Status};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: malformed header: {msg}")]
    Header { line: usize, msg: String },
    #[error("no `p cnf` header before clauses")]
    MissingHeader,
    #[error("line {line}: literal {literal} out of range for {n} variables")]
    LiteralOutOfRange { line: usize, literal: i64, n: usize },
    #[error("line {line}: invalid literal {token:?}")]
    Literal { line: usize, token: String },
    #[error("clause {clause} is a tautology (contains both {var} and -{var}); pass --drop-tautologies to remove it")]
    Tautology { clause: usize, var: usize },
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCount { declared: usize, found: usize },
    #[error("last clause is not terminated by 0")]
    Unterminated,
    #[error("line {line}: unknown token {token:?} (expected +, - or 0)")]
    Token { line: usize, token: String },
    #[error("line {line}: row has {found} cells, expected {expected}")]
    Ragged { line: usize, expected: usize, found: usize },
    #[error("invalid JSON scheme: {0}")]
    Json(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// What to do with a clause containing both `v` and `-v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TautologyPolicy {
    #[default]
    Reject,
    Drop,
}

pub fn parse_dimacs(text: &str) -> Result<Scheme, ParseError> {
    parse_dimacs_with(text, TautologyPolicy::Reject)
}

pub fn parse_dimacs_with(text: &str, policy: TautologyPolicy) -> Result<Scheme, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut rows: Vec<Vec<Fill>> = Vec::new();
    let mut current: Vec<Fill> = Vec::new();
    let mut open = false;
    let mut tautological = false;
    let mut parsed = 0usize;

    for (lineno, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())) {
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(ParseError::Header { line: lineno, msg: "duplicate header".into() });
            }
            header = Some(parse_header(lineno, line)?);
            continue;
        }
        let (n, _) = header.ok_or(ParseError::MissingHeader)?;
        for tok in line.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| ParseError::Literal { line: lineno, token: tok.into() })?;
            if !open {
                current = vec![Fill::Absent; n];
                open = true;
                tautological = false;
            }
            if lit == 0 {
                parsed += 1;
                if !tautological {
                    rows.push(std::mem::take(&mut current));
                }
                open = false;
                continue;
            }
            let v = lit.unsigned_abs() as usize;
            if v > n {
                return Err(ParseError::LiteralOutOfRange { line: lineno, literal: lit, n });
            }
            let f = if lit > 0 { Fill::Positive } else { Fill::Negative };
            match current[v - 1] {
                Fill::Absent => current[v - 1] = f,
                existing if existing == f => {}
                _ => match policy {
                    TautologyPolicy::Reject => return Err(ParseError::Tautology { clause: parsed + 1, var: v }),
                    TautologyPolicy::Drop => tautological = true,
                },
            }
        }
    }
    if open {
        return Err(ParseError::Unterminated);
    }
    let (n, m) = header.ok_or(ParseError::MissingHeader)?;
    if parsed != m {
        return Err(ParseError::ClauseCount { declared: m, found: parsed });
    }
    Ok(Scheme::new(n, rows)?)
}

fn parse_header(line: usize, text: &str) -> Result<(usize, usize), ParseError> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    let bad = |msg: &str| ParseError::Header { line, msg: msg.into() };
    if toks.len() != 4 || toks[0] != "p" || toks[1] != "cnf" {
        return Err(bad("expected `p cnf <vars> <clauses>`"));
    }
    let n = toks[2].parse().map_err(|_| bad("variable count is not a nonnegative integer"))?;
    let m = toks[3].parse().map_err(|_| bad("clause count is not a nonnegative integer"))?;
    Ok((n, m))
}

pub fn emit_dimacs(s: &Scheme) -> String {
    let mut out = format!("p cnf {} {}\n", s.n(), s.m());
    for clause in s.clauses() {
        for l in clause {
            let _ = write!(out, "{l} ");
        }
        out.push_str("0\n");
    }
    out
}

/// Parses the `+ - 0` grid. Every `\n`-terminated line is a row (an empty line
/// is a row of a zero-column scheme); a final unterminated line counts when
/// it is non-blank.
pub fn parse_scheme_text(text: &str) -> Result<Scheme, ParseError> {
    let mut rows: Vec<Vec<Fill>> = Vec::new();
    let mut width: Option<usize> = None;
    let body = text.strip_suffix('\n').unwrap_or(text);
    if body.trim().is_empty() && !text.contains('\n') {
        return Ok(Scheme::empty(0));
    }
    for (i, line) in body.split('\n').enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        let row = line
            .split_whitespace()
            .map(|tok| match tok {
                "+" => Ok(Fill::Positive),
                "-" => Ok(Fill::Negative),
                "0" => Ok(Fill::Absent),
                _ => Err(ParseError::Token { line: i + 1, token: tok.into() }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => return Err(ParseError::Ragged { line: i + 1, expected: w, found: row.len() }),
            _ => {}
        }
        rows.push(row);
    }
    Ok(Scheme::new(width.unwrap_or(0), rows)?)
}

pub fn emit_scheme_text(s: &Scheme) -> String {
    let mut out = String::new();
    for row in s.rows() {
        let toks: Vec<&str> = row
            .iter()
            .map(|f| match f {
                Fill::Positive => "+",
                Fill::Negative => "-",
                Fill::Absent => "0",
            })
            .collect();
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

/// The grid in `x / x̄ / 0` notation, for human reading.
pub fn render_grid(s: &Scheme) -> String {
    let mut out = String::new();
    for row in s.rows() {
        let toks: Vec<&str> = row
            .iter()
            .map(|f| match f {
                Fill::Positive => "x ",
                Fill::Negative => "x\u{304}",
                Fill::Absent => "0 ",
            })
            .collect();
        out.push_str(toks.join(" ").trim_end());
        out.push('\n');
    }
    out
}

/// JSON form of a scheme: rows as arrays of `1 / -1 / 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeDoc {
    pub n: usize,
    pub m: usize,
    pub rows: Vec<Vec<i8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<Status>,
}

impl SchemeDoc {
    pub fn from_scheme(s: &Scheme) -> Self {
        SchemeDoc {
            n: s.n(),
            m: s.m(),
            rows: s.rows().iter().map(|r| r.iter().map(|f| f.value()).collect()).collect(),
            status: Some(s.status()),
        }
    }

    pub fn to_scheme(&self) -> Result<Scheme, ParseError> {
        if self.rows.len() != self.m {
            return Err(ParseError::Json(format!("m = {} but {} rows given", self.m, self.rows.len())));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| Fill::from_value(v).ok_or_else(|| ParseError::Json(format!("invalid cell value {v}"))))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Scheme::new(self.n, rows)?)
    }
}

/// Detected input syntax.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Dimacs,
    SchemeText,
    Json,
}

/// DIMACS if the first meaningful line is a `p cnf` header or a `c` comment,
/// JSON if the text starts with `{`, scheme text otherwise.
pub fn detect_format(text: &str) -> InputFormat {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
    if first.starts_with('{') {
        InputFormat::Json
    } else if first.starts_with("p cnf") || first.starts_with('c') || first.starts_with("p ") {
        InputFormat::Dimacs
    } else {
        InputFormat::SchemeText
    }
}

pub fn read_scheme(text: &str, policy: TautologyPolicy) -> Result<Scheme, ParseError> {
    match detect_format(text) {
        InputFormat::Dimacs => parse_dimacs_with(text, policy),
        InputFormat::SchemeText => parse_scheme_text(text),
        InputFormat::Json => {
            // a bare document, or any JSON object carrying one under "scheme"
            let value: serde_json::Value = serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
            let inner = match value.get("scheme") {
                Some(v) if v.is_object() => v.clone(),
                _ => value,
            };
            let doc: SchemeDoc = serde_json::from_value(inner).map_err(|e| ParseError::Json(e.to_string()))?;
            doc.to_scheme()
        }
    }
}
