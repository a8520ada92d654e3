//! Complete polynomial-time solvers for 2-SAT and HORN schemes.
//!
//! Both work on restricted schemes (assigned columns kept, all absent), so
//! column indices stay those of the input.

use serde::Serialize;

use crate::scheme::{Assignment, Fill, Scheme};
use crate::transforms::{restrict_unchecked, Satisfiability};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("clause {clause} is outside the {class} class")]
    NotInClass { class: &'static str, clause: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub verdict: Satisfiability,
    /// Present iff the verdict is SAT.
    pub witness: Option<Assignment>,
    /// Number of variables fixed by propagation or pure-column removal.
    pub steps: usize,
}

impl SolveResult {
    fn unsat(steps: usize) -> Self {
        SolveResult { verdict: Satisfiability::Unsat, witness: None, steps }
    }

    fn sat(s: &Scheme, values: &[Option<bool>], steps: usize) -> Self {
        let x = Assignment::from_bools(&values.iter().map(|v| v.unwrap_or(false)).collect::<Vec<_>>());
        assert!(s.evaluate(&x).expect("length matches"), "solver produced a non-solution");
        SolveResult { verdict: Satisfiability::Sat, witness: Some(x), steps }
    }
}

pub fn is_2sat(s: &Scheme) -> bool {
    s.max_row_len() <= 2
}

/// Every row has at most one positive literal.
pub fn is_horn(s: &Scheme) -> bool {
    first_non_horn(s).is_none()
}

fn first_non_horn(s: &Scheme) -> Option<usize> {
    (0..s.m()).find(|&i| s.rows()[i].iter().filter(|&&f| f == Fill::Positive).count() > 1)
}

fn first_unit(s: &Scheme) -> Option<(usize, bool)> {
    (0..s.m()).find(|&i| s.row_len(i) == 1).map(|i| {
        let (j, f) = s.literals(i).next().unwrap();
        (j, f == Fill::Positive)
    })
}

/// Sets `var := value` and then every forced fact; `None` on an empty clause.
fn propagate(s: &Scheme, var: usize, value: bool) -> Option<(Scheme, Vec<(usize, bool)>)> {
    let mut cur = restrict_unchecked(s, var, value);
    let mut trail = vec![(var, value)];
    loop {
        if cur.has_empty_clause() {
            return None;
        }
        let Some((j, v)) = first_unit(&cur) else { return Some((cur, trail)) };
        cur = restrict_unchecked(&cur, j, v);
        trail.push((j, v));
    }
}

fn remove_pure(s: &mut Scheme, values: &mut [Option<bool>]) -> usize {
    let mut steps = 0;
    loop {
        let pure = (0..s.n()).find_map(|j| {
            let col = s.rows().iter().map(|r| r[j]);
            let (pos, neg) = col.fold((false, false), |(p, n), f| (p || f == Fill::Positive, n || f == Fill::Negative));
            (pos != neg).then_some((j, pos))
        });
        let Some((j, v)) = pure else { return steps };
        *s = restrict_unchecked(s, j, v);
        values[j] = Some(v);
        steps += 1;
    }
}

/// Pure-column removal, fact acceptance, then for the lowest-index open
/// variable: propagate `true`, else `false`, else UNSAT; commit the
/// surviving propagation and repeat.
pub fn solve_2sat(s: &Scheme) -> Result<SolveResult, SolveError> {
    if let Some(i) = (0..s.m()).find(|&i| s.row_len(i) > 2) {
        return Err(SolveError::NotInClass { class: "2-SAT", clause: i + 1 });
    }
    let mut cur = s.clone();
    let mut values: Vec<Option<bool>> = vec![None; s.n()];
    let mut steps = 0;
    loop {
        if cur.has_empty_clause() {
            return Ok(SolveResult::unsat(steps));
        }
        steps += remove_pure(&mut cur, &mut values);
        if let Some((j, v)) = first_unit(&cur) {
            // a fact is forced: its propagation failing means UNSAT
            match propagate(&cur, j, v) {
                Some((next, trail)) => {
                    commit(&mut values, &trail, &mut steps);
                    cur = next;
                    continue;
                }
                None => return Ok(SolveResult::unsat(steps + 1)),
            }
        }
        let Some(var) = (0..cur.n()).find(|&j| cur.column_occurrences(j) > 0) else {
            return Ok(SolveResult::sat(s, &values, steps));
        };
        let attempt = propagate(&cur, var, true).or_else(|| propagate(&cur, var, false));
        match attempt {
            Some((next, trail)) => {
                commit(&mut values, &trail, &mut steps);
                cur = next;
            }
            None => return Ok(SolveResult::unsat(steps)),
        }
    }
}

fn commit(values: &mut [Option<bool>], trail: &[(usize, bool)], steps: &mut usize) {
    for &(j, v) in trail {
        debug_assert!(values[j].is_none());
        values[j] = Some(v);
    }
    *steps += trail.len();
}

/// Accepts positive facts until none is left or an empty clause appears;
/// every other variable is set false.
pub fn solve_horn(s: &Scheme) -> Result<SolveResult, SolveError> {
    if let Some(i) = first_non_horn(s) {
        return Err(SolveError::NotInClass { class: "HORN", clause: i + 1 });
    }
    let mut cur = s.clone();
    let mut values: Vec<Option<bool>> = vec![None; s.n()];
    let mut steps = 0;
    loop {
        debug_assert!(is_horn(&cur));
        if cur.has_empty_clause() {
            return Ok(SolveResult::unsat(steps));
        }
        let fact = (0..cur.m()).find(|&i| cur.row_len(i) == 1 && cur.rows()[i].contains(&Fill::Positive));
        let Some(i) = fact else { return Ok(SolveResult::sat(s, &values, steps)) };
        let j = cur.rows()[i].iter().position(|&f| f == Fill::Positive).unwrap();
        cur = restrict_unchecked(&cur, j, true);
        values[j] = Some(true);
        steps += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::format::parse_scheme_text;

    fn sch(t: &str) -> Scheme {
        parse_scheme_text(t).unwrap()
    }

    #[test]
    fn class_predicates() {
        assert!(!is_2sat(&fixtures::f5()));
        assert!(is_horn(&fixtures::f5()));
        assert!(!is_horn(&fixtures::g()));
        assert!(is_2sat(&Scheme::empty(3)) && is_horn(&Scheme::empty(3)));
    }

    #[test]
    fn two_sat_examples() {
        let r = solve_2sat(&sch("+ 0\n0 +\n")).unwrap();
        assert_eq!(r.witness, Some(Assignment::from_bools(&[true, true])));
        assert_eq!(solve_2sat(&sch("+ +\n+ -\n- +\n- -\n")).unwrap().verdict, Satisfiability::Unsat);
        let sub = Scheme::new(4, fixtures::f4().rows()[2..].to_vec()).unwrap();
        assert_eq!(solve_2sat(&sub).unwrap().verdict, Satisfiability::Sat);
        assert!(matches!(solve_2sat(&fixtures::f4()), Err(SolveError::NotInClass { clause: 1, .. })));
    }

    #[test]
    fn two_sat_needs_second_branch() {
        // x1 true forces x2 and ¬x2
        let s = sch("- + 0\n- - 0\n+ 0 +\n+ 0 -\n0 + +\n");
        let r = solve_2sat(&s).unwrap();
        assert_eq!(r.verdict, Satisfiability::Unsat);
        let s = sch("- + 0\n- - 0\n+ 0 +\n0 - -\n0 + +\n");
        let r = solve_2sat(&s).unwrap();
        assert_eq!(r.verdict, Satisfiability::Sat);
        assert!(s.evaluate(r.witness.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn horn_examples() {
        assert_eq!(solve_horn(&fixtures::f5()).unwrap().verdict, Satisfiability::Unsat);
        let r = solve_horn(&sch("- - 0\n0 - +\n")).unwrap();
        assert_eq!(r.witness, Some(Assignment::all_false(3)));
        assert_eq!(r.steps, 0);
        let r = solve_horn(&sch("+\n")).unwrap();
        assert_eq!(r.witness, Some(Assignment::all_true(1)));
        assert_eq!(solve_horn(&fixtures::f4()).unwrap().witness, Some(Assignment::from_bools(&[false, true, false, false])));
        assert!(solve_horn(&fixtures::g()).is_err());
    }
}
