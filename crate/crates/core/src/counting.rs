//! Exact model counting.
//!
//! The cluster expansion sums `(−1)^|c| 2^(n − k_c)` over every set `c` of
//! pairwise non-orthogonal clauses (the empty set included), where `k_c` is
//! the number of distinct variables in `c`. Sets holding an orthogonal pair
//! contribute zero, so only cliques of the compatibility graph are visited.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::scheme::{rows_orthogonal, Fill, Scheme};

pub const DEFAULT_MAX_VARS: usize = 4096;
/// Largest clause count accepted by [`count_power_set`].
pub const MAX_POWER_SET_CLAUSES: usize = 24;
/// Largest variable count accepted by [`count_via_primes`].
pub const MAX_PRIME_VARS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CountError {
    #[error("{what} needs n <= {limit}, scheme has {n} variables")]
    TooManyVariables { what: &'static str, n: usize, limit: usize },
    #[error("power-set expansion needs m <= {limit}, scheme has {m} clauses")]
    TooManyClauses { m: usize, limit: usize },
    #[error("cluster enumeration exceeded {limit} clusters")]
    ClusterLimit { limit: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountOptions {
    pub max_vars: usize,
    /// Abort after visiting this many non-empty clusters.
    pub max_clusters: Option<u64>,
    /// Worker threads; root clauses are dealt round-robin.
    pub jobs: usize,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { max_vars: DEFAULT_MAX_VARS, max_clusters: None, jobs: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    pub n: usize,
    pub m: usize,
    /// Exact number of satisfying assignments.
    pub total: BigInt,
    /// Signed contribution of all clusters of each size; size 0 is `2^n`.
    pub partials: BTreeMap<usize, BigInt>,
    /// Number of non-empty non-orthogonal clusters visited.
    pub clusters: u64,
}

type Bits = Vec<u64>;

fn bits(len: usize) -> Bits {
    vec![0; len.div_ceil(64)]
}

fn set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn popcount(b: &Bits) -> usize {
    b.iter().map(|w| w.count_ones() as usize).sum()
}

struct Tables {
    /// compat[i]: rows j > i not orthogonal to row i
    compat: Vec<Bits>,
    support: Vec<Bits>,
}

impl Tables {
    fn new(s: &Scheme) -> Self {
        let m = s.m();
        let rows = s.rows();
        let compat = (0..m)
            .map(|i| {
                let mut b = bits(m);
                for j in i + 1..m {
                    if !rows_orthogonal(&rows[i], &rows[j]) {
                        set(&mut b, j);
                    }
                }
                b
            })
            .collect();
        let support = rows
            .iter()
            .map(|r| {
                let mut b = bits(s.n());
                for (j, f) in r.iter().enumerate() {
                    if f.is_present() {
                        set(&mut b, j);
                    }
                }
                b
            })
            .collect();
        Tables { compat, support }
    }
}

/// `hist[size][k]` = number of clusters of that size spanning `k` variables.
struct Histogram {
    hist: Vec<Vec<u64>>,
    clusters: u64,
}

impl Histogram {
    fn bump(&mut self, size: usize, k: usize) {
        if self.hist.len() <= size {
            self.hist.resize_with(size + 1, Vec::new);
        }
        let row = &mut self.hist[size];
        if row.len() <= k {
            row.resize(k + 1, 0);
        }
        row[k] += 1;
    }

    fn merge(&mut self, other: Histogram) {
        for (size, row) in other.hist.into_iter().enumerate() {
            for (k, c) in row.into_iter().enumerate() {
                if c > 0 {
                    self.bump(size, k);
                    self.hist[size][k] += c - 1;
                }
            }
        }
        self.clusters += other.clusters;
    }
}

struct Search<'a> {
    t: &'a Tables,
    out: Histogram,
    limit: Option<u64>,
}

impl Search<'_> {
    fn dfs(&mut self, size: usize, cand: &Bits, support: &Bits) -> Result<(), CountError> {
        self.out.clusters += 1;
        if let Some(limit) = self.limit {
            if self.out.clusters > limit {
                return Err(CountError::ClusterLimit { limit });
            }
        }
        self.out.bump(size, popcount(support));
        for (w, &word) in cand.iter().enumerate() {
            let mut rest = word;
            while rest != 0 {
                let j = w * 64 + rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let next: Bits = cand.iter().zip(&self.t.compat[j]).map(|(a, b)| a & b).collect();
                let sup: Bits = support.iter().zip(&self.t.support[j]).map(|(a, b)| a | b).collect();
                self.dfs(size + 1, &next, &sup)?;
            }
        }
        Ok(())
    }
}

fn run_roots(t: &Tables, roots: impl Iterator<Item = usize>, limit: Option<u64>) -> Result<Histogram, CountError> {
    let mut search = Search { t, out: Histogram { hist: Vec::new(), clusters: 0 }, limit };
    for i in roots {
        search.dfs(1, &t.compat[i], &t.support[i])?;
    }
    Ok(search.out)
}

fn pow2(e: usize) -> BigInt {
    BigInt::one() << e
}

/// Exact model count by the non-orthogonal cluster expansion.
pub fn count_solutions(s: &Scheme) -> Result<CountResult, CountError> {
    count_solutions_with(s, &CountOptions::default())
}

pub fn count_solutions_with(s: &Scheme, opts: &CountOptions) -> Result<CountResult, CountError> {
    let (n, m) = (s.n(), s.m());
    if n > opts.max_vars {
        return Err(CountError::TooManyVariables { what: "cluster counting", n, limit: opts.max_vars });
    }
    let t = Tables::new(s);
    let jobs = opts.jobs.clamp(1, m.max(1));
    let hist = if jobs == 1 {
        run_roots(&t, 0..m, opts.max_clusters)?
    } else {
        // a per-worker limit keeps the total bounded by jobs * limit
        let parts: Vec<Result<Histogram, CountError>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..jobs)
                .map(|w| {
                    let t = &t;
                    scope.spawn(move || run_roots(t, (w..m).step_by(jobs), opts.max_clusters))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("counting worker panicked")).collect()
        });
        let mut acc = Histogram { hist: Vec::new(), clusters: 0 };
        for p in parts {
            acc.merge(p?);
        }
        if let Some(limit) = opts.max_clusters {
            if acc.clusters > limit {
                return Err(CountError::ClusterLimit { limit });
            }
        }
        acc
    };
    let mut partials = BTreeMap::new();
    partials.insert(0, pow2(n));
    for (size, row) in hist.hist.iter().enumerate().skip(1) {
        let mut sum = BigInt::zero();
        for (k, &c) in row.iter().enumerate() {
            if c > 0 {
                sum += pow2(n - k) * c;
            }
        }
        if size % 2 == 1 {
            sum = -sum;
        }
        partials.insert(size, sum);
    }
    let total = partials.values().sum();
    Ok(CountResult { n, m, total, partials, clusters: hist.clusters })
}

/// The same expansion summed literally over all `2^m` clause subsets;
/// subsets with an orthogonal pair are visited and contribute zero. Used as a
/// cross-check for [`count_solutions`].
pub fn count_power_set(s: &Scheme) -> Result<CountResult, CountError> {
    let (n, m) = (s.n(), s.m());
    if m > MAX_POWER_SET_CLAUSES {
        return Err(CountError::TooManyClauses { m, limit: MAX_POWER_SET_CLAUSES });
    }
    let mut partials: BTreeMap<usize, BigInt> = BTreeMap::new();
    let mut clusters = 0;
    for subset in 0u32..1 << m {
        let size = subset.count_ones() as usize;
        let mut zeros = 0;
        let mut vanishes = false;
        for j in 0..n {
            let (mut pos, mut neg) = (false, false);
            for i in (0..m).filter(|i| subset >> i & 1 == 1) {
                match s.rows()[i][j] {
                    Fill::Positive => pos = true,
                    Fill::Negative => neg = true,
                    Fill::Absent => {}
                }
            }
            vanishes |= pos && neg;
            zeros += usize::from(!pos && !neg);
        }
        let entry = partials.entry(size).or_default();
        if vanishes {
            continue;
        }
        if size > 0 {
            clusters += 1;
        }
        let term = pow2(zeros);
        if size % 2 == 1 {
            *entry -= term;
        } else {
            *entry += term;
        }
    }
    let total = partials.values().sum();
    Ok(CountResult { n, m, total, partials, clusters })
}

/// `2^n` minus the number of distinct primes in the full blow-up.
pub fn count_via_primes(s: &Scheme) -> Result<BigInt, CountError> {
    let n = s.n();
    if n > MAX_PRIME_VARS {
        return Err(CountError::TooManyVariables { what: "prime counting", n, limit: MAX_PRIME_VARS });
    }
    let mut present = vec![false; 1 << n];
    for row in s.rows() {
        let mut base = 0usize;
        let mut free = 0usize;
        for (j, f) in row.iter().enumerate() {
            match f {
                Fill::Positive => base |= 1 << j,
                Fill::Negative => {}
                Fill::Absent => free |= 1 << j,
            }
        }
        // enumerate every submask of `free`
        let mut sub = free;
        loop {
            present[base | sub] = true;
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
    }
    let primes = present.iter().filter(|&&p| p).count();
    Ok(BigInt::from((1usize << n) - primes))
}

/// Result of [`solution_lower_bound`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LowerBound {
    /// The scheme holds an empty clause.
    NegInfinity,
    Finite(BigInt),
}

impl LowerBound {
    /// True when the bound alone proves satisfiability.
    pub fn certifies_sat(&self) -> bool {
        matches!(self, LowerBound::Finite(b) if *b > BigInt::zero())
    }
}

impl std::fmt::Display for LowerBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LowerBound::NegInfinity => f.write_str("-inf"),
            LowerBound::Finite(b) => write!(f, "{b}"),
        }
    }
}

/// `2^n − Σ_i 2^(n − k_i)`: the expansion truncated after single clusters.
pub fn solution_lower_bound(s: &Scheme) -> LowerBound {
    if s.has_empty_clause() {
        return LowerBound::NegInfinity;
    }
    let n = s.n();
    let mut b = pow2(n);
    for i in 0..s.m() {
        b -= pow2(n - s.row_len(i));
    }
    LowerBound::Finite(b)
}
