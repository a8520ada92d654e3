//! Seeded random scheme generators shared by the integration tests.
#![allow(dead_code)]

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use satscheme::{Fill, Scheme};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_n: usize,
    pub max_m: usize,
    pub max_k: usize,
    /// Chance that a clause is empty.
    pub empty_rate: f64,
}

pub const GENERAL: Shape = Shape { max_n: 10, max_m: 15, max_k: 4, empty_rate: 0.01 };
pub const THREE_SAT: Shape = Shape { max_n: 10, max_m: 15, max_k: 3, empty_rate: 0.01 };
pub const TWO_SAT: Shape = Shape { max_n: 10, max_m: 15, max_k: 2, empty_rate: 0.01 };
pub const SMALL: Shape = Shape { max_n: 8, max_m: 12, max_k: 3, empty_rate: 0.01 };

fn clause<R: Rng>(rng: &mut R, n: usize, shape: Shape, horn: bool) -> Vec<Fill> {
    let mut row = vec![Fill::Absent; n];
    if rng.gen_bool(shape.empty_rate) || n == 0 {
        return row;
    }
    let k = rng.gen_range(1..=shape.max_k.min(n));
    let vars = sample(rng, n, k).into_vec();
    let positive = if horn && rng.gen_bool(0.6) { Some(rng.gen_range(0..k)) } else { None };
    for (t, &j) in vars.iter().enumerate() {
        row[j] = if horn {
            if positive == Some(t) { Fill::Positive } else { Fill::Negative }
        } else if rng.gen_bool(0.5) {
            Fill::Positive
        } else {
            Fill::Negative
        };
    }
    row
}

pub fn scheme<R: Rng>(rng: &mut R, shape: Shape) -> Scheme {
    let n = rng.gen_range(1..=shape.max_n);
    let m = rng.gen_range(0..=shape.max_m);
    let rows = (0..m).map(|_| clause(rng, n, shape, false)).collect();
    Scheme::new(n, rows).unwrap()
}

pub fn horn<R: Rng>(rng: &mut R, shape: Shape) -> Scheme {
    let n = rng.gen_range(1..=shape.max_n);
    let m = rng.gen_range(0..=shape.max_m);
    let rows = (0..m).map(|_| clause(rng, n, shape, true)).collect();
    Scheme::new(n, rows).unwrap()
}

pub fn batch(seed: u64, count: usize, shape: Shape) -> Vec<Scheme> {
    let mut r = rng(seed);
    (0..count).map(|_| scheme(&mut r, shape)).collect()
}

pub fn horn_batch(seed: u64, count: usize, shape: Shape) -> Vec<Scheme> {
    let mut r = rng(seed);
    (0..count).map(|_| horn(&mut r, shape)).collect()
}

/// Independent satisfiability decision by unit propagation and branching,
/// for schemes too wide for exhaustive enumeration.
pub fn dpll(s: &Scheme) -> bool {
    fn go(clauses: Vec<Vec<i64>>) -> bool {
        let mut clauses = clauses;
        loop {
            if clauses.iter().any(|c| c.is_empty()) {
                return false;
            }
            let Some(unit) = clauses.iter().find(|c| c.len() == 1).map(|c| c[0]) else { break };
            clauses = assign(&clauses, unit);
        }
        let Some(&lit) = clauses.first().and_then(|c| c.first()) else { return true };
        go(assign(&clauses, lit)) || go(assign(&clauses, -lit))
    }
    fn assign(clauses: &[Vec<i64>], lit: i64) -> Vec<Vec<i64>> {
        clauses
            .iter()
            .filter(|c| !c.contains(&lit))
            .map(|c| c.iter().copied().filter(|&l| l != -lit).collect())
            .collect()
    }
    go(s.clauses())
}

/// Sorted solution list by brute force, independent of the library oracle.
pub fn solutions(s: &Scheme) -> Vec<Vec<bool>> {
    let mut out: Vec<Vec<bool>> = satscheme::Assignment::all(s.n())
        .filter(|x| s.evaluate(x).unwrap())
        .map(|x| x.to_bools())
        .collect();
    out.sort();
    out
}
