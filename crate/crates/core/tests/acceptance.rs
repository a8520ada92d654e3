//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every criterion reports even when an
//! earlier one fails. The process exits nonzero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::Rng;

use satscheme::checks::{
    self, check_coefficient_bound, check_eigen_bounds, check_parity, check_resolution_chain,
    check_resolution_pairs, check_special_classes, eigen_range, quadratic_matrix, EigenMode, Evidence, PairStep,
    Verdict, EPSILON,
};
use satscheme::counting::{count_power_set, count_solutions, count_via_primes, solution_lower_bound};
use satscheme::fixtures;
use satscheme::minimizer::{minimize_u, s_factor, Case, MinimizeOptions};
use satscheme::oracle::oracle_scan;
use satscheme::pseudo_boolean::{
    extend, pb_coefficients, unit_weight_direct, unsat_count_direct, ExtendStrategy, Style, WeightScheme,
};
use satscheme::pt_solvers::{solve_2sat, solve_horn};
use satscheme::transforms::{
    accept_facts, assign, blow_up, drop_subsumed, flip, full_blow_up, metavariable_eliminate,
    reduce_read3, remove_pure_columns, shrink, split, FlipMask, Satisfiability,
};
use satscheme::{Assignment, Dyadic, Fill, Scheme, Status};

/// Wall-clock limit for the worked examples.
const EXAMPLE_LIMIT: Duration = Duration::from_secs(1);
/// Wall-clock limit for each property.
const PROPERTY_LIMIT: Duration = Duration::from_secs(60);
const INSTANCES: usize = 500;

type Outcome = Result<String, String>;
type Property = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn fail<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let detail = f()?;
    let took = start.elapsed();
    ensure!(took < limit, "took {took:?}, limit {limit:?}");
    Ok(format!("{detail} [{took:.2?}]"))
}

fn oracle_count(s: &Scheme) -> u64 {
    oracle_scan(s).unwrap().count
}

// 1. Cluster expansion of F5.
fn criterion_1() -> Outcome {
    timed(EXAMPLE_LIMIT, || {
        let r = count_solutions(&fixtures::f5()).map_err(fail)?;
        let partials: Vec<(usize, BigInt)> = r.partials.clone().into_iter().collect();
        let expected: Vec<(usize, BigInt)> =
            [16, -24, 9, -1].iter().enumerate().map(|(k, &v)| (k, BigInt::from(v))).collect();
        ensure!(partials == expected, "partials {partials:?}");
        ensure!(r.total == BigInt::from(0), "total {}", r.total);
        Ok("F5 total 0, partials +16 -24 +9 -1".into())
    })
}

// 2. Counts of F4 and G.
fn criterion_2() -> Outcome {
    let f4 = timed(EXAMPLE_LIMIT, || {
        let s = fixtures::f4();
        let total = count_solutions(&s).map_err(fail)?.total;
        ensure!(total == BigInt::from(2), "F4 count {total}");
        let listed: BTreeSet<Vec<bool>> =
            oracle_scan(&s).map_err(fail)?.solutions.unwrap().iter().map(Assignment::to_bools).collect();
        let expected: BTreeSet<Vec<bool>> =
            [vec![false, true, false, false], vec![true, true, false, false]].into_iter().collect();
        ensure!(listed == expected, "F4 solutions {listed:?}");
        Ok("F4 count 2 with the expected two solutions".to_string())
    })?;
    let g = timed(EXAMPLE_LIMIT, || {
        let total = count_solutions(&fixtures::g()).map_err(fail)?.total;
        ensure!(total == BigInt::from(14), "G count {total}");
        ensure!(oracle_count(&fixtures::g()) == 14, "oracle disagrees on G");
        Ok("G count 14".to_string())
    })?;
    Ok(format!("{f4}; {g}"))
}

// 3. The polynomial of F5.
fn criterion_3() -> Outcome {
    const EQ: &str = "8u = 12 + x\u{2081} \u{2212} 2x\u{2082} + 2x\u{2083} \u{2212} 3x\u{2084} \u{2212} x\u{2081}x\u{2082} \
                      + x\u{2081}x\u{2083} + x\u{2082}x\u{2084} \u{2212} x\u{2083}x\u{2084} \u{2212} x\u{2081}x\u{2082}x\u{2083} \
                      \u{2212} x\u{2082}x\u{2083}x\u{2084}";
    let p = pb_coefficients(&fixtures::f5(), &WeightScheme::Canonical).map_err(fail)?;
    let text = p.render(Style::Unicode);
    ensure!(text == EQ, "rendered {text}");
    let u = p.eval(&Assignment::all_true(4)).map_err(fail)?;
    ensure!(u == Dyadic::ONE, "u(all true) = {u}");
    Ok(format!("{text}; u(+1,+1,+1,+1) = 1"))
}

// 4. Extension of G.
fn criterion_4() -> Outcome {
    const EXPECTED: &str = "8u\u{2032} = 10 \u{2212} 4x\u{2082} \u{2212} 2x\u{2084} \u{2212} 2x\u{2085} \
                            + 2x\u{2082}x\u{2083} + 2x\u{2082}x\u{2085} + 2x\u{2083}x\u{2084}";
    let e = extend(&fixtures::g(), ExtendStrategy::FlipFirst).map_err(fail)?;
    ensure!(e == fixtures::g_ext(), "extension differs from the five listed clauses");
    let p = pb_coefficients(&e, &WeightScheme::Canonical).map_err(fail)?;
    ensure!(p.cubic.values().all(|v| v.is_zero()) && !p.has_cubic(), "cubic terms remain: {:?}", p.cubic);
    let text = p.render_labeled(Style::Unicode, "u\u{2032}");
    ensure!(text == EXPECTED, "rendered {text}");
    Ok(format!("all cubic coefficients zero; {text}"))
}

// 5. Minimizer walkthroughs.
fn criterion_5() -> Outcome {
    let f5 = timed(EXAMPLE_LIMIT, || {
        let s = fixtures::f5();
        let s1 = s_factor(&s, 0).map_err(fail)?;
        let values: Vec<Dyadic> = s1.values().into_iter().collect();
        ensure!(values == vec![Dyadic::ZERO, Dyadic::new(1, 1)], "S1 values {values:?}");
        let out = minimize_u(&s, None, &MinimizeOptions::default()).map_err(fail)?;
        let first = out.trace.first().ok_or("empty trace")?;
        ensure!(first.var == 1 && first.case == Case::NonNegative, "first step {first:?}");
        ensure!(first.fixed == Some(-1), "x1 fixed to {:?}", first.fixed);
        let cert = out.unsat_certificate.clone().ok_or("no certificate")?;
        ensure!(
            (cert.scale, cert.scaled_constant, cert.scaled_mass) == (8, 11, 9),
            "certificate {cert:?}"
        );
        ensure!(cert.path == vec![-1], "certificate path {:?}", cert.path);
        ensure!(out.verdict == Satisfiability::Unsat, "verdict {:?}", out.verdict);
        let oracle_min = oracle_scan(&s).map_err(fail)?.u_min;
        ensure!(out.u_min == Dyadic::ONE && oracle_min == 1, "u_min {} oracle {oracle_min}", out.u_min);
        Ok("F5: x1=-1 in case i, S1 in {0, 1/2}, UNSAT at 11 > 9 (scale 8), u_min 1".to_string())
    })?;
    let g = timed(EXAMPLE_LIMIT, || {
        let out = minimize_u(&fixtures::g_ext(), None, &MinimizeOptions::default()).map_err(fail)?;
        ensure!(out.branch_count == 0, "{} branch points", out.branch_count);
        ensure!(fixtures::g().evaluate(&out.minimizer).map_err(fail)?, "witness does not satisfy G");
        ensure!(out.u_min == Dyadic::ZERO, "u_min {}", out.u_min);
        Ok(format!("Gext: 0 branch points, witness {:?} satisfies G", out.minimizer.signs()))
    })?;
    Ok(format!("{f5}; {g}"))
}

// 6. Resolution and metavariable elimination of F5.
fn criterion_6() -> Outcome {
    let v = check_resolution_chain(&fixtures::f5(), &[0, 3, 2]).map_err(fail)?;
    let Evidence::Resolution { status, applied, .. } = &v.evidence else {
        return Err(format!("evidence {:?}", v.evidence));
    };
    ensure!(*status == Status::Contradiction && v.is_unsat(), "chain ended in {status:?}");
    let e = metavariable_eliminate(&fixtures::f5(), None).map_err(fail)?;
    let counts: Vec<usize> = e.chain.iter().map(Scheme::m).collect();
    ensure!(counts == vec![5, 4, 3, 2], "row counts {counts:?}");
    ensure!(e.verdict == Satisfiability::Unsat, "verdict {:?}", e.verdict);
    Ok(format!("chain a1,a4,a3 applied {applied:?} -> contradiction; elimination rows 5,4,3,2 -> UNSAT"))
}

// 7a. Three independent counts agree.
fn property_counts() -> Outcome {
    let batch = common::batch(0x7a, INSTANCES, common::GENERAL);
    let mut power_set = 0;
    for (i, s) in batch.iter().enumerate() {
        let cluster = count_solutions(s).map_err(fail)?.total;
        let primes = count_via_primes(s).map_err(fail)?;
        let oracle = BigInt::from(oracle_count(s));
        ensure!(cluster == oracle && primes == oracle, "instance {i}: cluster {cluster} primes {primes} oracle {oracle}");
        ensure!(common::solutions(s).len() as u64 == oracle_count(s), "instance {i}: oracle miscounts");
        if s.m() <= 12 {
            ensure!(count_power_set(s).map_err(fail)?.total == oracle, "instance {i}: power-set count");
            power_set += 1;
        }
        if solution_lower_bound(s).certifies_sat() {
            ensure!(oracle > BigInt::from(0), "instance {i}: lower bound certifies an unsatisfiable scheme");
        }
    }
    Ok(format!("{INSTANCES} schemes, {power_set} also by power-set sum"))
}

// 7b. Polynomial evaluation equals the violated-clause count.
fn property_polynomial() -> Outcome {
    let batch = common::batch(0x7b, INSTANCES, common::THREE_SAT);
    let mut points = 0u64;
    for (i, s) in batch.iter().enumerate() {
        let canonical = pb_coefficients(s, &WeightScheme::Canonical).map_err(fail)?;
        let unit = pb_coefficients(s, &WeightScheme::Unit).map_err(fail)?;
        for x in Assignment::all(s.n()) {
            let u = canonical.eval(&x).map_err(fail)?;
            let direct = unsat_count_direct(s, &x).map_err(fail)?;
            ensure!(u == Dyadic::from_int(direct as i128), "instance {i} at {:?}: u = {u}, direct {direct}", x.signs());
            let w = unit.eval(&x).map_err(fail)?;
            let wd = unit_weight_direct(s, &x).map_err(fail)?;
            ensure!(w == Dyadic::from_int(wd as i128), "instance {i}: unit weights {w} vs {wd}");
            points += 1;
        }
    }
    Ok(format!("{INSTANCES} 3-SAT schemes, {points} assignments"))
}

/// Every product row of a split is `Y_i ∨ Z_j` for a non-orthogonal pair,
/// and every such pair is represented.
fn split_products_sound(s: &Scheme, var: usize) -> Result<(), String> {
    let r = split(s, var).map_err(fail)?;
    let orthogonal = |a: &[Fill], b: &[Fill]| a.iter().zip(b).any(|(x, y)| x.is_present() && *y == x.flipped());
    let disjoin =
        |a: &[Fill], b: &[Fill]| -> Vec<Fill> { a.iter().zip(b).map(|(&x, &y)| if x.is_present() { x } else { y }).collect() };
    let mut expected = BTreeSet::new();
    for y in &r.positive {
        for z in &r.negative {
            if !orthogonal(y, z) {
                expected.insert(disjoin(y, z).iter().map(|f| f.value()).collect::<Vec<i8>>());
            }
        }
    }
    let rows = r.scheme.rows();
    let products = rows.len() - r.rest.len();
    ensure!(rows[products..] == r.rest[..], "rest rows out of place");
    let got: BTreeSet<Vec<i8>> = rows[..products].iter().map(|r| r.iter().map(|f| f.value()).collect()).collect();
    ensure!(got.len() == products, "duplicate product rows");
    ensure!(got == expected, "product rows differ from non-orthogonal pairs");
    Ok(())
}

// 7c. Transformation invariances.
fn property_transforms() -> Outcome {
    let mut rng = common::rng(0x7c);
    let batch = common::batch(0x7c0, INSTANCES, common::GENERAL);
    let mut blown = 0;
    let mut widened = 0;
    for (i, s) in batch.iter().enumerate() {
        let n = s.n();
        let count = oracle_count(s);
        let sat = count > 0;
        let sols = common::solutions(s);

        let mask = FlipMask::from_code(rng.gen_range(0..1u64 << n), n);
        ensure!(oracle_count(&flip(s, &mask).map_err(fail)?) == count, "instance {i}: flip changed the count");

        let cells: Vec<(usize, usize)> =
            (0..s.m()).flat_map(|r| (0..n).map(move |c| (r, c))).filter(|&(r, c)| s.rows()[r][c] == Fill::Absent).collect();
        if !cells.is_empty() {
            let (r, c) = cells[rng.gen_range(0..cells.len())];
            let b = blow_up(s, r, c).map_err(fail)?;
            ensure!(common::solutions(&b) == sols, "instance {i}: blow_up changed the solutions");
            ensure!(common::solutions(&shrink(&b)) == sols, "instance {i}: shrink after blow_up");
            blown += 1;
        }
        ensure!(common::solutions(&shrink(s)) == sols, "instance {i}: shrink changed the solutions");
        ensure!(common::solutions(&drop_subsumed(s)) == sols, "instance {i}: drop_subsumed changed the solutions");
        let full = full_blow_up(s).map_err(fail)?;
        ensure!(common::solutions(&full) == sols, "instance {i}: full_blow_up changed the solutions");

        let (pure, forced) = remove_pure_columns(s);
        ensure!(pure.n() + forced.len() == n, "instance {i}: pure removal lost columns");
        ensure!((oracle_count(&pure) > 0) == sat, "instance {i}: pure removal changed satisfiability");

        let var = rng.gen_range(0..n);
        let either = oracle_count(&assign(s, var, true).map_err(fail)?) > 0
            || oracle_count(&assign(s, var, false).map_err(fail)?) > 0;
        ensure!(either == sat, "instance {i}: assignment cofactors disagree");

        let facts = accept_facts(s);
        ensure!(facts.scheme.n() + facts.trail.len() == n, "instance {i}: fact trail length");
        ensure!((oracle_count(&facts.scheme) > 0) == sat, "instance {i}: accept_facts changed satisfiability");

        let split_sat = oracle_count(&split(s, var).map_err(fail)?.scheme) > 0;
        ensure!(split_sat == sat, "instance {i}: split changed satisfiability");
        split_products_sound(s, var).map_err(|e| format!("instance {i}: {e}"))?;

        let r3 = reduce_read3(s);
        ensure!((0..r3.n()).all(|j| r3.column_occurrences(j) <= 3), "instance {i}: read3 left a heavy column");
        ensure!(common::dpll(s) == sat, "instance {i}: reference solver disagrees with oracle");
        ensure!(common::dpll(&r3) == sat, "instance {i}: read3 changed satisfiability");
        if r3.n() > n {
            widened += 1;
        }
    }

    let small = common::batch(0x7c1, INSTANCES, common::SMALL);
    for (i, s) in small.iter().chain(fixtures::all().iter().map(|(_, s)| s)).enumerate() {
        let verdict = metavariable_eliminate(s, None).map_err(fail)?.verdict;
        ensure!(verdict.is_sat() == (oracle_count(s) > 0), "elimination instance {i}: verdict {verdict:?}");
    }
    Ok(format!(
        "{INSTANCES} schemes ({blown} blow-ups, {widened} widened by read3); elimination on {INSTANCES} small schemes and fixtures"
    ))
}

fn sound(v: &Verdict, sat: bool) -> bool {
    !(v.is_sat() && !sat) && !(v.is_unsat() && sat)
}

// 7d. No check contradicts the oracle.
fn property_checks() -> Outcome {
    let mut rng = common::rng(0x7d);
    let general = common::batch(0x7d0, INSTANCES, common::GENERAL);
    let three = common::batch(0x7d1, INSTANCES, common::THREE_SAT);
    let fixtures: Vec<Scheme> = fixtures::all().into_iter().map(|(_, s)| s).collect();
    let mut certified = 0;
    for (i, s) in general.iter().chain(&three).chain(&fixtures).enumerate() {
        let sat = oracle_count(s) > 0;
        let report = checks::run_all(s).map_err(|e| format!("instance {i}: {e}"))?;
        for entry in &report.checks {
            ensure!(sound(&entry.verdict, sat), "instance {i}: {} claims {:?}", entry.name, entry.verdict.verdict);
            if let Evidence::Witness { assignment } = &entry.verdict.evidence {
                ensure!(s.evaluate(assignment).map_err(fail)?, "instance {i}: {} witness fails", entry.name);
            }
        }
        if report.overall != checks::VerdictKind::Inconclusive {
            certified += 1;
        }

        ensure!(sound(&check_parity(s).map_err(fail)?, sat), "instance {i}: parity");
        if let Some((name, v)) = check_special_classes(s) {
            ensure!(sound(&v, sat), "instance {i}: {name}");
        }
        let mut order: Vec<usize> = (0..s.n()).collect();
        order.sort_by_key(|_| rng.gen::<u32>());
        ensure!(sound(&check_resolution_chain(s, &order).map_err(fail)?, sat), "instance {i}: resolution chain");
        let steps = random_pair_steps(s, &mut rng);
        ensure!(sound(&check_resolution_pairs(s, &steps).map_err(fail)?, sat), "instance {i}: pairwise resolution");

        if !s.is_3sat() {
            continue;
        }
        let p = pb_coefficients(s, &WeightScheme::Canonical).map_err(fail)?;
        ensure!(sound(&check_coefficient_bound(&p), sat), "instance {i}: coefficient bound");
        for mode in [EigenMode::ExactSmallN, EigenMode::Relaxed] {
            ensure!(sound(&check_eigen_bounds(s, &p, mode).map_err(fail)?, sat), "instance {i}: eigen {mode:?}");
        }

        let (lo, hi) = eigen_range(&p);
        let m = quadratic_matrix(&p);
        let n = s.n();
        for x in Assignment::all(n) {
            let q: f64 = (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .map(|(a, b)| m[a][b] * f64::from(x.sign(a) * x.sign(b)))
                .sum();
            ensure!(
                n as f64 * lo - EPSILON <= q && q <= n as f64 * hi + EPSILON,
                "instance {i}: Rayleigh sandwich fails"
            );
        }

        let mask = FlipMask::from_code(rng.gen_range(0..1u64 << n), n);
        let flipped = pb_coefficients(&flip(s, &mask).map_err(fail)?, &WeightScheme::Canonical).map_err(fail)?;
        ensure!(
            check_coefficient_bound(&flipped).verdict == check_coefficient_bound(&p).verdict,
            "instance {i}: coefficient bound not flip-invariant"
        );
    }
    Ok(format!("{} schemes, {certified} certified by run_all, none unsound", general.len() + three.len() + fixtures.len()))
}

fn random_pair_steps<R: Rng>(s: &Scheme, rng: &mut R) -> Vec<PairStep> {
    let var = rng.gen_range(0..s.n());
    let pos: Vec<usize> = (0..s.m()).filter(|&i| s.rows()[i][var] == Fill::Positive).collect();
    let neg: Vec<usize> = (0..s.m()).filter(|&i| s.rows()[i][var] == Fill::Negative).collect();
    if pos.is_empty() || neg.is_empty() {
        return Vec::new();
    }
    vec![PairStep { var, pos_row: pos[rng.gen_range(0..pos.len())], neg_row: neg[rng.gen_range(0..neg.len())] }]
}

// 7e. Polynomial-time solvers.
fn property_solvers() -> Outcome {
    let two = common::batch(0x7e0, INSTANCES, common::TWO_SAT);
    let horn = common::horn_batch(0x7e1, INSTANCES, common::GENERAL);
    let mut sat = [0, 0];
    for (k, (batch, solve)) in [(&two, solve_2sat as fn(&Scheme) -> _), (&horn, solve_horn)].into_iter().enumerate() {
        for (i, s) in batch.iter().enumerate() {
            let r = solve(s).map_err(|e| format!("class {k} instance {i}: {e}"))?;
            let expected = oracle_count(s) > 0;
            ensure!(r.verdict.is_sat() == expected, "class {k} instance {i}: verdict {:?}", r.verdict);
            if let Some(w) = &r.witness {
                ensure!(s.evaluate(w).map_err(fail)?, "class {k} instance {i}: witness fails");
            }
            ensure!(r.witness.is_some() == expected, "class {k} instance {i}: witness presence");
            sat[k] += usize::from(expected);
        }
    }
    Ok(format!("{INSTANCES} 2-SAT ({} SAT) and {INSTANCES} HORN ({} SAT) schemes", sat[0], sat[1]))
}

// 7f. Minimizer against the oracle.
fn property_minimizer() -> Outcome {
    let batch = common::batch(0x7f, INSTANCES, common::THREE_SAT);
    let mut hits = 0;
    let off = MinimizeOptions { shortcut: false, branch_limit: None };
    for (i, s) in batch.iter().enumerate() {
        let oracle = oracle_scan(s).map_err(fail)?;
        for opts in [MinimizeOptions::default(), off.clone()] {
            let out = minimize_u(s, None, &opts).map_err(|e| format!("instance {i}: {e}"))?;
            ensure!(
                out.u_min == Dyadic::from_int(oracle.u_min as i128),
                "instance {i} (shortcut {}): u_min {} vs oracle {}",
                opts.shortcut,
                out.u_min,
                oracle.u_min
            );
            let at = unsat_count_direct(s, &out.minimizer).map_err(fail)?;
            ensure!(at == oracle.u_min, "instance {i}: minimizer attains {at}");
            ensure!(out.verdict.is_sat() == (oracle.count > 0), "instance {i}: verdict");
            hits += out.shortcut_hits;
        }
    }
    Ok(format!("{INSTANCES} 3-SAT schemes, shortcut on and off, {hits} shortcut hits"))
}

// 7. The property suite.
fn criterion_7() -> Outcome {
    let parts: [Property; 6] = [
        ("a", property_counts),
        ("b", property_polynomial),
        ("c", property_transforms),
        ("d", property_checks),
        ("e", property_solvers),
        ("f", property_minimizer),
    ];
    let mut lines = Vec::new();
    let mut failed = Vec::new();
    for (tag, f) in parts {
        match run(|| timed(PROPERTY_LIMIT, f)) {
            Ok(d) => lines.push(format!("({tag}) {d}")),
            Err(e) => failed.push(format!("({tag}) {e}")),
        }
    }
    for l in &lines {
        println!("    {l}");
    }
    if failed.is_empty() {
        Ok(format!("{} sub-properties hold", lines.len()))
    } else {
        Err(failed.join("; "))
    }
}

// 8. Sum of u over the cube.
fn criterion_8() -> Outcome {
    timed(PROPERTY_LIMIT, || {
        let mut checked = 0;
        let seeds = [(0x80, common::GENERAL), (0x81, common::THREE_SAT), (0x82, common::TWO_SAT)];
        for (seed, shape) in seeds {
            for (i, s) in common::batch(seed, INSTANCES, shape).iter().enumerate() {
                let n = s.n() as u32;
                let weights = WeightScheme::Canonical.weights(s).map_err(fail)?;
                let target: Dyadic = weights.iter().map(|&c| c * (1i128 << n)).sum();
                let direct: Dyadic =
                    Assignment::all(s.n()).map(|x| Dyadic::from_int(unsat_count_direct(s, &x).unwrap() as i128)).sum();
                ensure!(direct == target, "seed {seed} instance {i}: sum {direct} vs {target}");
                if s.is_3sat() {
                    let p = pb_coefficients(s, &WeightScheme::Canonical).map_err(fail)?;
                    let sum: Dyadic = Assignment::all(s.n()).map(|x| p.eval(&x).unwrap()).sum();
                    ensure!(sum == target, "seed {seed} instance {i}: polynomial sum {sum} vs {target}");
                    ensure!(p.constant * (1i128 << n) == target, "seed {seed} instance {i}: constant term");
                }
                checked += 1;
            }
        }
        Ok(format!("{checked} random schemes"))
    })
}

fn run(f: impl FnOnce() -> Outcome) -> Outcome {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(p) => Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into())),
    }
}

fn main() {
    let criteria: [fn() -> Outcome; 8] =
        [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8];
    let mut failures = 0;
    for (k, f) in criteria.into_iter().enumerate() {
        match run(f) {
            Ok(detail) => println!("criterion {}: PASS  {detail}", k + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {}: FAIL  {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} of 8 criteria pass", 8 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
