//! The `satscheme` command line. [`run`] does all the work so that it can be
//! driven from tests; the binary only forwards process arguments and streams.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::checks::{run_all, VerdictKind};
use crate::counting::{count_power_set, count_solutions_with, count_via_primes, solution_lower_bound, CountOptions};
use crate::fixtures;
use crate::format::{emit_dimacs, emit_scheme_text, read_scheme, render_grid, SchemeDoc, TautologyPolicy};
use crate::minimizer::{minimize_u, MinimizeOptions, DEFAULT_BRANCH_LIMIT};
use crate::oracle::{oracle_scan_with, OracleOptions};
use crate::pseudo_boolean::{
    extend, find_satisfiable_extension, pb_coefficients, ExtendStrategy, Style, WeightScheme, DEFAULT_MAX_EXTENSIONS,
};
use crate::pt_solvers::{solve_2sat, solve_horn};
use crate::scheme::{Assignment, Scheme};
use crate::transforms::{self as tf, FlipMask, Satisfiability};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_SAT: i32 = 10;
pub const EXIT_UNSAT: i32 = 20;

#[derive(Debug, Parser)]
#[command(name = "satscheme", version, about = "CNF analysis on matrix schemes")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Read the scheme from this file instead of stdin.
    #[arg(short, long, global = true)]
    pub file: Option<PathBuf>,
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pub text: bool,
    /// Worker threads for counting and the oracle.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Remove clauses containing `v` and `-v` instead of rejecting the input.
    #[arg(long, global = true)]
    pub drop_tautologies: bool,
    /// Largest variable count for brute-force scans.
    #[arg(long, global = true, env = "SATSCHEME_ORACLE_MAX_VARS", default_value_t = crate::oracle::DEFAULT_MAX_VARS)]
    pub oracle_max_vars: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse the input and print it as a JSON scheme document.
    Parse,
    /// Print the scheme in another format.
    Emit {
        #[arg(long, value_enum, default_value_t = EmitFormat::Scheme)]
        format: EmitFormat,
    },
    /// Apply a sequence of transformations, e.g. `--ops flip:1,3 shrink`.
    Transform {
        /// Operations, 1-based indices, separated by spaces or `;`: flip:C,..
        /// permute-rows:P,.. permute-cols:P,.. blow-up:R,C full-blow-up shrink
        /// drop-subsumed pure assign:V=B restrict:V=B facts resolve:V
        /// resolve-pair:V,P,N split:V eliminate[:V,..] read3
        /// extend[:first|second|third|all]
        #[arg(long, num_args = 1.., required = true, verbatim_doc_comment)]
        ops: Vec<String>,
    },
    /// Exact model count.
    Count {
        #[arg(long, value_enum, default_value_t = CountMethod::Cluster)]
        method: CountMethod,
        #[arg(long)]
        max_clusters: Option<u64>,
    },
    /// Coefficients of the unsatisfied-clause polynomial.
    Pbform {
        #[arg(long, value_enum, default_value_t = Weights::Canonical)]
        weights: Weights,
        /// ASCII rendering (`-`, `x1`) instead of Unicode.
        #[arg(long)]
        ascii: bool,
    },
    /// Run every satisfiability check.
    Check,
    /// Decide satisfiability with a complete method.
    Solve {
        #[arg(long, value_enum, default_value_t = SolveMethod::Oracle)]
        method: SolveMethod,
    },
    /// Minimize the number of violated clauses by variable elimination.
    Minimize {
        /// Comma-separated 1-based elimination order.
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        no_shortcut: bool,
        #[arg(long, env = "SATSCHEME_BRANCH_LIMIT", default_value_t = DEFAULT_BRANCH_LIMIT)]
        branch_limit: u64,
    },
    /// Append adverse-parity copies of the 3-literal clauses.
    Extend {
        #[arg(long, value_enum, default_value_t = Strategy::FlipFirst)]
        strategy: Strategy,
    },
    /// Rewrite so that every variable occurs at most three times.
    Read3,
    /// Brute-force count, solutions and violated-clause histogram.
    Oracle,
    /// Print a built-in formula (F4, F5, G, Gext).
    Fixture { name: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EmitFormat {
    Dimacs,
    Scheme,
    Json,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CountMethod {
    Cluster,
    Primes,
    PowerSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Weights {
    Canonical,
    Unit,
    Parity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveMethod {
    #[value(name = "2sat")]
    TwoSat,
    Horn,
    Oracle,
    Split,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    FlipFirst,
    FlipSecond,
    FlipThird,
    FlipAll,
    Exhaustive,
}

/// An error with a message for stderr; always exit code 1.
#[derive(Debug)]
pub struct CliError(pub String);

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

struct Output {
    body: String,
    code: i32,
}

impl Output {
    fn json(v: &impl Serialize, code: i32) -> Result<Self, CliError> {
        Ok(Output { body: serde_json::to_string_pretty(v)? + "\n", code })
    }

    fn text(body: String, code: i32) -> Self {
        Output { body, code }
    }
}

/// Parses `argv` (program name first), executes, and returns the exit code.
pub fn run<I, S>(argv: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    match execute(&cli, stdin) {
        Ok(out) => {
            if stdout.write_all(out.body.as_bytes()).is_err() {
                return EXIT_ERROR;
            }
            out.code
        }
        Err(CliError(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_ERROR
        }
    }
}

fn read_input(g: &Global, stdin: &mut dyn Read) -> Result<Scheme, CliError> {
    let text = match &g.file {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))?,
        None => {
            let mut t = String::new();
            stdin.read_to_string(&mut t)?;
            t
        }
    };
    let policy = if g.drop_tautologies { TautologyPolicy::Drop } else { TautologyPolicy::Reject };
    Ok(read_scheme(&text, policy)?)
}

/// Integers that fit `i64` become JSON numbers, larger ones strings.
pub fn big_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(i) => json!(i),
        None => json!(v.to_string()),
    }
}

fn scheme_output(g: &Global, s: &Scheme, extra: Value) -> Result<Output, CliError> {
    if g.text {
        return Ok(Output::text(render_grid(s), EXIT_OK));
    }
    let mut v = json!({ "scheme": SchemeDoc::from_scheme(s) });
    if let (Value::Object(map), Value::Object(more)) = (&mut v, extra) {
        map.extend(more);
    }
    Output::json(&v, EXIT_OK)
}

fn sat_code(v: Satisfiability) -> i32 {
    match v {
        Satisfiability::Sat => EXIT_SAT,
        Satisfiability::Unsat => EXIT_UNSAT,
    }
}

/// Parses a comma-separated list of 1-based indices into 0-based ones.
fn indices(text: &str, what: &str) -> Result<Vec<usize>, CliError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(CliError(format!("invalid {what} {t:?} (expected a 1-based index)"))),
        })
        .collect()
}

fn truth(text: &str) -> Result<bool, CliError> {
    match text.trim().to_ascii_lowercase().as_str() {
        "1" | "+1" | "+" | "t" | "true" => Ok(true),
        "0" | "-1" | "-" | "f" | "false" => Ok(false),
        other => Err(CliError(format!("invalid truth value {other:?}"))),
    }
}

fn witness_json(x: &Option<Assignment>) -> Value {
    match x {
        Some(a) => json!({ "signs": a.signs(), "values": a.to_bools() }),
        None => Value::Null,
    }
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Output, CliError> {
    let g = &cli.global;
    if let Command::Fixture { name } = &cli.command {
        let s = fixtures::by_name(name)
            .ok_or_else(|| CliError(format!("unknown fixture {name:?}; known: {}", fixtures::NAMES.join(", "))))?;
        return scheme_output(g, &s, json!({}));
    }
    let s = read_input(g, stdin)?;
    match &cli.command {
        Command::Fixture { .. } => unreachable!(),
        Command::Parse => scheme_output(g, &s, json!({})),
        Command::Emit { format } => Ok(Output::text(
            match format {
                EmitFormat::Dimacs => emit_dimacs(&s),
                EmitFormat::Scheme => emit_scheme_text(&s),
                EmitFormat::Json => serde_json::to_string_pretty(&SchemeDoc::from_scheme(&s))? + "\n",
                EmitFormat::Grid => render_grid(&s),
            },
            EXIT_OK,
        )),
        Command::Transform { ops } => {
            let ops: Vec<&str> =
                ops.iter().flat_map(|o| o.split(|c: char| c == ';' || c.is_whitespace())).filter(|o| !o.is_empty()).collect();
            let mut cur = s;
            let mut trail = Vec::new();
            for op in ops {
                let (next, entry) = apply_op(&cur, op)?;
                cur = next;
                trail.push(entry);
            }
            scheme_output(g, &cur, json!({ "trail": trail }))
        }
        Command::Count { method, max_clusters } => {
            let lb = solution_lower_bound(&s);
            let out = match method {
                CountMethod::Cluster | CountMethod::PowerSet => {
                    let r = if *method == CountMethod::Cluster {
                        let opts = CountOptions { max_clusters: *max_clusters, jobs: g.jobs, ..Default::default() };
                        count_solutions_with(&s, &opts)?
                    } else {
                        count_power_set(&s)?
                    };
                    let partials: serde_json::Map<String, Value> =
                        r.partials.iter().map(|(k, v)| (k.to_string(), big_json(v))).collect();
                    json!({
                        "n": r.n, "m": r.m, "total": big_json(&r.total),
                        "partials": partials, "clusters": r.clusters,
                        "lower_bound": lb.to_string(),
                    })
                }
                CountMethod::Primes => {
                    json!({ "n": s.n(), "m": s.m(), "total": big_json(&count_via_primes(&s)?), "lower_bound": lb.to_string() })
                }
            };
            if g.text {
                return Ok(Output::text(format!("{}\n", out["total"]), EXIT_OK));
            }
            Output::json(&out, EXIT_OK)
        }
        Command::Pbform { weights, ascii } => {
            let w = match weights {
                Weights::Canonical => WeightScheme::Canonical,
                Weights::Unit => WeightScheme::Unit,
                Weights::Parity => WeightScheme::parity_damped(&s),
            };
            let p = pb_coefficients(&s, &w)?;
            let style = if *ascii { Style::Ascii } else { Style::Unicode };
            let poly = p.render(style);
            if g.text {
                return Ok(Output::text(poly + "\n", EXIT_OK));
            }
            let mut v = serde_json::to_value(p.scaled())?;
            v["polynomial"] = json!(poly);
            Output::json(&v, EXIT_OK)
        }
        Command::Check => {
            let report = run_all(&s)?;
            let code = match report.overall {
                VerdictKind::SatCertified => EXIT_SAT,
                VerdictKind::UnsatCertified => EXIT_UNSAT,
                VerdictKind::Inconclusive => EXIT_OK,
            };
            if g.text {
                let mut t = String::new();
                for c in &report.checks {
                    t.push_str(&format!("{:<22}{:?}\n", c.name, c.verdict.verdict));
                }
                t.push_str(&format!("overall: {:?} by {:?}\n", report.overall, report.certified_by));
                return Ok(Output::text(t, code));
            }
            Output::json(&report, code)
        }
        Command::Solve { method } => {
            let (verdict, witness, steps) = match method {
                SolveMethod::TwoSat => {
                    let r = solve_2sat(&s)?;
                    (r.verdict, r.witness, Some(r.steps))
                }
                SolveMethod::Horn => {
                    let r = solve_horn(&s)?;
                    (r.verdict, r.witness, Some(r.steps))
                }
                SolveMethod::Oracle => {
                    let r = oracle_scan_with(&s, &OracleOptions { max_vars: g.oracle_max_vars, jobs: g.jobs })?;
                    let w = r.solutions.as_ref().and_then(|v| v.first().cloned());
                    let w = match (r.count > 0, w) {
                        (true, None) => crate::oracle::find_solution(&s)?,
                        (_, w) => w,
                    };
                    let v = if r.count > 0 { Satisfiability::Sat } else { Satisfiability::Unsat };
                    (v, w, None)
                }
                SolveMethod::Split => {
                    let e = tf::metavariable_eliminate(&s, None)?;
                    (e.verdict, None, Some(e.chain.len() - 1))
                }
                SolveMethod::Minimize => {
                    let o = minimize_u(&s, None, &MinimizeOptions::default())?;
                    let w = o.verdict.is_sat().then(|| o.minimizer.clone());
                    (o.verdict, w, None)
                }
            };
            let code = sat_code(verdict);
            if g.text {
                return Ok(Output::text(format!("{verdict:?}\n"), code));
            }
            Output::json(&json!({ "verdict": verdict, "witness": witness_json(&witness), "steps": steps }), code)
        }
        Command::Minimize { order, no_shortcut, branch_limit } => {
            let order = order.as_deref().map(|o| indices(o, "variable")).transpose()?;
            let opts = MinimizeOptions { shortcut: !no_shortcut, branch_limit: Some(*branch_limit) };
            let o = minimize_u(&s, order.as_deref(), &opts)?;
            let code = sat_code(o.verdict);
            if g.text {
                return Ok(Output::text(format!("u_min = {} ({:?})\n", o.u_min, o.verdict), code));
            }
            Output::json(&o, code)
        }
        Command::Extend { strategy } => {
            let (e, chosen) = match strategy {
                Strategy::Exhaustive => {
                    let (st, e) = find_satisfiable_extension(&s, DEFAULT_MAX_EXTENSIONS)?;
                    (e, Some(st))
                }
                other => {
                    let st = match other {
                        Strategy::FlipFirst => ExtendStrategy::FlipFirst,
                        Strategy::FlipSecond => ExtendStrategy::FlipSecond,
                        Strategy::FlipThird => ExtendStrategy::FlipThird,
                        _ => ExtendStrategy::FlipAll,
                    };
                    (extend(&s, st)?, None)
                }
            };
            scheme_output(g, &e, json!({ "strategies": chosen }))
        }
        Command::Read3 => scheme_output(g, &tf::reduce_read3(&s), json!({})),
        Command::Oracle => {
            let r = oracle_scan_with(&s, &OracleOptions { max_vars: g.oracle_max_vars, jobs: g.jobs })?;
            if g.text {
                return Ok(Output::text(format!("count = {}, u_min = {}\n", r.count, r.u_min), EXIT_OK));
            }
            Output::json(&r, EXIT_OK)
        }
    }
}

/// One transformation step. Returns the new scheme and its trail entry.
fn apply_op(s: &Scheme, op: &str) -> Result<(Scheme, Value), CliError> {
    let (name, args) = op.split_once(':').unwrap_or((op, ""));
    let bad = |msg: &str| CliError(format!("op {op:?}: {msg}"));
    let entry = |extra: Value| json!({ "op": name, "args": args, "result": extra });
    let two = |what: &str| -> Result<(usize, usize), CliError> {
        match indices(args, what)?.as_slice() {
            &[a, b] => Ok((a, b)),
            _ => Err(bad("expected two indices")),
        }
    };
    let one = |what: &str| -> Result<usize, CliError> {
        match indices(args, what)?.as_slice() {
            &[a] => Ok(a),
            _ => Err(bad("expected one index")),
        }
    };
    let assignment = || -> Result<(usize, bool), CliError> {
        let (v, val) = args.split_once('=').ok_or_else(|| bad("expected VAR=VALUE"))?;
        let v = indices(v, "variable")?;
        match v.as_slice() {
            &[v] => Ok((v, truth(val)?)),
            _ => Err(bad("expected one variable")),
        }
    };
    let forced = |list: &[(usize, bool)]| Value::from(list.iter().map(|&(v, b)| json!([v + 1, b])).collect::<Vec<_>>());
    Ok(match name {
        "flip" => (tf::flip(s, &FlipMask::new(&indices(args, "column")?, s.n())?)?, entry(Value::Null)),
        "permute-rows" => (tf::permute_rows(s, &indices(args, "row")?)?, entry(Value::Null)),
        "permute-cols" => (tf::permute_columns(s, &indices(args, "column")?)?, entry(Value::Null)),
        "blow-up" => {
            let (r, c) = two("index")?;
            (tf::blow_up(s, r, c)?, entry(Value::Null))
        }
        "full-blow-up" => (tf::full_blow_up(s)?, entry(Value::Null)),
        "shrink" => (tf::shrink(s), entry(Value::Null)),
        "drop-subsumed" => (tf::drop_subsumed(s), entry(Value::Null)),
        "pure" => {
            let (t, list) = tf::remove_pure_columns(s);
            (t, entry(json!({ "forced": forced(&list) })))
        }
        "assign" => {
            let (v, b) = assignment()?;
            (tf::assign(s, v, b)?, entry(Value::Null))
        }
        "restrict" => {
            let (v, b) = assignment()?;
            (tf::restrict(s, v, b)?, entry(Value::Null))
        }
        "facts" => {
            let out = tf::accept_facts(s);
            (out.scheme, entry(json!({ "trail": forced(&out.trail) })))
        }
        "resolve" => {
            let r = tf::resolve(s, one("variable")?)?;
            (r.scheme, entry(json!({ "conclusive": r.conclusive })))
        }
        "resolve-pair" => {
            let idx = indices(args, "index")?;
            let &[v, p, q] = idx.as_slice() else { return Err(bad("expected VAR,POS_ROW,NEG_ROW")) };
            let r = tf::resolve_pair(s, v, p, q)?;
            (r.scheme, entry(json!({ "conclusive": r.conclusive })))
        }
        "split" => (tf::split(s, one("variable")?)?.scheme, entry(Value::Null)),
        "eliminate" => {
            let order = if args.is_empty() { None } else { Some(indices(args, "variable")?) };
            let e = tf::metavariable_eliminate(s, order.as_deref())?;
            let rows: Vec<usize> = e.chain.iter().map(Scheme::m).collect();
            let last = e.chain.last().cloned().unwrap_or_else(|| s.clone());
            (last, entry(json!({ "verdict": e.verdict, "rows": rows })))
        }
        "read3" => (tf::reduce_read3(s), entry(Value::Null)),
        "extend" => {
            let st = match args {
                "" | "first" => ExtendStrategy::FlipFirst,
                "second" => ExtendStrategy::FlipSecond,
                "third" => ExtendStrategy::FlipThird,
                "all" => ExtendStrategy::FlipAll,
                _ => return Err(bad("strategy must be first, second, third or all")),
            };
            (extend(s, st)?, entry(Value::Null))
        }
        _ => return Err(bad("unknown operation")),
    })
}
