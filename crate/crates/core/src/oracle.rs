//! Brute-force ground truth over all `2^n` assignments.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::scheme::{Assignment, Fill, Scheme};

pub const DEFAULT_MAX_VARS: usize = 30;
/// Solutions are listed only up to this many variables.
pub const MAX_LISTED_VARS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("oracle scan needs n <= {limit}, scheme has {n} variables")]
    TooManyVariables { n: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleOptions {
    pub max_vars: usize,
    pub jobs: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { max_vars: DEFAULT_MAX_VARS, jobs: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub n: usize,
    pub m: usize,
    pub count: u64,
    /// Sorted lexicographically with false before true; `None` above
    /// [`MAX_LISTED_VARS`] variables.
    pub solutions: Option<Vec<Assignment>>,
    /// Minimum number of violated clauses.
    pub u_min: usize,
    /// Number of assignments violating exactly `k` clauses.
    pub u_histogram: BTreeMap<usize, u64>,
}

struct Partial {
    solutions: Vec<u64>,
    count: u64,
    hist: Vec<u64>,
}

/// Scans the `2^low` assignments whose high bits equal `high`, in Gray-code
/// order, updating per-row satisfied-literal counts incrementally.
fn scan_block(s: &Scheme, low: usize, high: u64, list: bool) -> Partial {
    let n = s.n();
    let mut occ: Vec<Vec<(usize, Fill)>> = vec![Vec::new(); n];
    for (i, row) in s.rows().iter().enumerate() {
        for (j, &f) in row.iter().enumerate() {
            if f.is_present() {
                occ[j].push((i, f));
            }
        }
    }
    let mut code = high << low;
    let x = Assignment::from_code(code, n);
    let mut sat: Vec<u32> = (0..s.m()).map(|i| s.literals(i).filter(|&(j, f)| f.satisfied_by(x.value(j))).count() as u32).collect();
    let mut unsat = sat.iter().filter(|&&c| c == 0).count();
    let mut part = Partial { solutions: Vec::new(), count: 0, hist: vec![0; s.m() + 1] };
    let total = 1u64 << low;
    for step in 0..total {
        if step > 0 {
            let j = step.trailing_zeros() as usize;
            let new = code >> j & 1 == 0;
            code ^= 1 << j;
            for &(i, f) in &occ[j] {
                if f.satisfied_by(new) {
                    sat[i] += 1;
                    if sat[i] == 1 {
                        unsat -= 1;
                    }
                } else {
                    sat[i] -= 1;
                    if sat[i] == 0 {
                        unsat += 1;
                    }
                }
            }
        }
        part.hist[unsat] += 1;
        if unsat == 0 {
            part.count += 1;
            if list {
                part.solutions.push(code);
            }
        }
    }
    part
}

pub fn oracle_scan(s: &Scheme) -> Result<OracleReport, OracleError> {
    oracle_scan_with(s, &OracleOptions::default())
}

pub fn oracle_scan_with(s: &Scheme, opts: &OracleOptions) -> Result<OracleReport, OracleError> {
    let n = s.n();
    if n > opts.max_vars {
        return Err(OracleError::TooManyVariables { n, limit: opts.max_vars });
    }
    let list = n <= MAX_LISTED_VARS;
    // largest power of two not above jobs, and at most 2^n blocks
    let high_bits = (usize::BITS - 1 - opts.jobs.max(1).leading_zeros()).min(n as u32) as usize;
    let low = n - high_bits;
    let parts: Vec<Partial> = if high_bits == 0 {
        vec![scan_block(s, low, 0, list)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> =
                (0..1u64 << high_bits).map(|h| scope.spawn(move || scan_block(s, low, h, list))).collect();
            handles.into_iter().map(|h| h.join().expect("oracle worker panicked")).collect()
        })
    };
    let mut count = 0;
    let mut hist = vec![0u64; s.m() + 1];
    let mut codes = Vec::new();
    for p in parts {
        count += p.count;
        for (k, c) in p.hist.into_iter().enumerate() {
            hist[k] += c;
        }
        codes.extend(p.solutions);
    }
    let solutions = list.then(|| {
        let mut sols: Vec<Assignment> = codes.into_iter().map(|c| Assignment::from_code(c, n)).collect();
        sols.sort();
        sols
    });
    let u_histogram: BTreeMap<usize, u64> = hist.into_iter().enumerate().filter(|&(_, c)| c > 0).collect();
    let u_min = *u_histogram.keys().next().expect("at least one assignment");
    Ok(OracleReport { n, m: s.m(), count, solutions, u_min, u_histogram })
}

/// Straightforward evaluation of every assignment; reference for the Gray
/// scan.
pub fn naive_scan(s: &Scheme) -> Result<OracleReport, OracleError> {
    let n = s.n();
    if n > DEFAULT_MAX_VARS {
        return Err(OracleError::TooManyVariables { n, limit: DEFAULT_MAX_VARS });
    }
    let mut report =
        OracleReport { n, m: s.m(), count: 0, solutions: None, u_min: usize::MAX, u_histogram: BTreeMap::new() };
    let mut sols = Vec::new();
    for x in Assignment::all(n) {
        let u = (0..s.m()).filter(|&i| !s.row_satisfied(i, &x)).count();
        *report.u_histogram.entry(u).or_insert(0) += 1;
        report.u_min = report.u_min.min(u);
        if u == 0 {
            report.count += 1;
            sols.push(x);
        }
    }
    if n <= MAX_LISTED_VARS {
        sols.sort();
        report.solutions = Some(sols);
    }
    Ok(report)
}

/// Satisfiability by exhaustive search, stopping at the first solution.
pub fn find_solution(s: &Scheme) -> Result<Option<Assignment>, OracleError> {
    let n = s.n();
    if n > DEFAULT_MAX_VARS {
        return Err(OracleError::TooManyVariables { n, limit: DEFAULT_MAX_VARS });
    }
    Ok(Assignment::all(n).find(|x| (0..s.m()).all(|i| s.row_satisfied(i, x))))
}

pub fn is_satisfiable(s: &Scheme) -> Result<bool, OracleError> {
    Ok(find_solution(s)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    #[test]
    fn f4_solutions() {
        let r = oracle_scan(&fixtures::f4()).unwrap();
        assert_eq!(r.count, 2);
        let sols = r.solutions.unwrap();
        assert_eq!(
            sols,
            vec![
                Assignment::from_bools(&[false, true, false, false]),
                Assignment::from_bools(&[true, true, false, false]),
            ]
        );
        assert_eq!(sols[0].signs(), &[-1, 1, -1, -1]);
    }

    #[test]
    fn fixture_reports() {
        let f5 = oracle_scan(&fixtures::f5()).unwrap();
        assert_eq!((f5.count, f5.u_min), (0, 1));
        assert_eq!(oracle_scan(&fixtures::g()).unwrap().count, 14);
        assert_eq!(f5.u_histogram.values().sum::<u64>(), 16);
        assert_eq!(find_solution(&fixtures::f5()).unwrap(), None);
    }

    #[test]
    fn degenerate_inputs() {
        let r = oracle_scan(&Scheme::empty(0)).unwrap();
        assert_eq!((r.count, r.u_min), (1, 0));
        assert_eq!(oracle_scan(&Scheme::empty(31)), Err(OracleError::TooManyVariables { n: 31, limit: 30 }));
        let big = oracle_scan(&Scheme::empty(17)).unwrap();
        assert_eq!(big.count, 1 << 17);
        assert!(big.solutions.is_none());
    }

    #[test]
    fn jobs_do_not_change_the_report() {
        let s = fixtures::g_ext();
        let one = oracle_scan(&s).unwrap();
        for jobs in [2, 3, 4, 64] {
            assert_eq!(oracle_scan_with(&s, &OracleOptions { jobs, ..Default::default() }).unwrap(), one);
        }
    }

    proptest! {
        #[test]
        fn gray_scan_matches_naive(s in crate::format::tests::arb_scheme(8, 12)) {
            let gray = oracle_scan(&s).unwrap();
            prop_assert_eq!(&gray, &naive_scan(&s).unwrap());
            prop_assert_eq!(gray.u_histogram.get(&0).copied().unwrap_or(0), gray.count);
            prop_assert_eq!(gray.u_histogram.values().sum::<u64>(), 1u64 << s.n());
        }
    }
}
