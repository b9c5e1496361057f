//! Command-line front end.
//!
//! Every command writes one envelope to the result stream, either as JSON
//! (`schema_version`, `command`, `parameters`, `results`, `violations`) or as
//! a CSV table. Counts are always decimal strings. Diagnostics and progress
//! go to the diagnostic stream.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::{self, Write};
use std::sync::Mutex;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::partition::{Partition, PartitionError};
use crate::pathgrid::{
    count_dp_with, count_recursive, enumerate_paths, DpMemory, GridError, GridRegion,
};
use crate::simion::{self, SweepConfig, SweepMode, SweepScope};
use crate::tp2::{parse_naturals, MatrixNN, PositiveSequence, SequencePair, Tp2Error};

pub const SCHEMA_VERSION: &str = "1.0";

/// Environment variable holding the default output format.
pub const FORMAT_ENV: &str = "FERRERS_FORMAT";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_CAP: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "ferrers",
    version,
    about = "Lattice paths avoiding a Ferrers diagram"
)]
struct Cli {
    /// Output format for the result stream.
    #[arg(long, value_enum, global = true, env = FORMAT_ENV, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count the paths N(m, n, λ).
    Count(CountArgs),
    /// List every admissible path (count with the enumerate engine).
    Enumerate(EnumerateArgs),
    /// The anti-diagonal sequence N(λ′₁+i, λ₁+ℓ−i, λ), i = 0..ℓ.
    Sequence(SequenceArgs),
    /// Exhaustive or random verification sweep.
    Verify(VerifyArgs),
    /// Order-2 total positivity utilities.
    #[command(subcommand)]
    Tp2(Tp2Command),
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Number of rows.
    #[arg(long)]
    m: usize,
    /// Number of columns.
    #[arg(long)]
    n: usize,
    /// Parts of λ, e.g. "3,1"; empty for ∅.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    partition: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Dp,
    Recursive,
    Enumerate,
}

#[derive(Debug, Args)]
struct CountArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_enum, default_value = "dp")]
    engine: Engine,
    /// Largest unrestricted path count the enumerate engine will walk.
    #[arg(long, default_value_t = 1_000_000)]
    cap: u64,
    /// Keep the whole DP table instead of one rolled row.
    #[arg(long)]
    full_table: bool,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = 1_000_000)]
    cap: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    LogConcave,
    Unimodal,
}

#[derive(Debug, Args)]
struct SequenceArgs {
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    partition: String,
    #[arg(long)]
    ell: usize,
    #[arg(long, value_enum, value_delimiter = ',')]
    checks: Vec<Check>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum What {
    Theorem,
    Chain,
    All,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 4)]
    box_m: usize,
    #[arg(long, default_value_t = 4)]
    box_n: usize,
    #[arg(long, default_value_t = 4)]
    ell_max: usize,
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: Mode,
    #[arg(long, required_if_eq("mode", "random"))]
    seed: Option<u64>,
    #[arg(long, required_if_eq("mode", "random"))]
    samples: Option<usize>,
    #[arg(long, value_enum, default_value = "all")]
    what: What,
    /// Report task counters on the diagnostic stream.
    #[arg(long)]
    progress: bool,
}

#[derive(Debug, Subcommand)]
enum Tp2Command {
    /// Check every 2×2 minor of a matrix given as "1,2;1,3".
    CheckMatrix { matrix: String },
    /// Lift a positive sequence to its two-row shifted matrix.
    LiftSequence { sequence: String },
    /// Ratio dominance of (a, x) implies dominance of their partial sums.
    CorollaryI {
        #[arg(long)]
        a: String,
        #[arg(long)]
        x: String,
    },
    /// Partial sums of a log-concave sequence are log-concave.
    CorollaryIi { sequence: String },
}

#[derive(Debug, Serialize)]
struct Envelope {
    schema_version: &'static str,
    command: String,
    parameters: BTreeMap<String, Value>,
    results: Value,
    violations: Vec<Value>,
}

/// A finished command: the envelope, its CSV rendering and the exit code.
struct Outcome {
    envelope: Envelope,
    table: Table,
    code: i32,
}

struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<PartitionError> for Failure {
    fn from(e: PartitionError) -> Self {
        Failure {
            code: EXIT_PARSE,
            message: e.to_string(),
        }
    }
}

impl From<GridError> for Failure {
    fn from(e: GridError) -> Self {
        let code = match e {
            GridError::DoesNotFit { .. } => EXIT_DOMAIN,
            GridError::CapExceeded { .. } => EXIT_CAP,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<Tp2Error> for Failure {
    fn from(e: Tp2Error) -> Self {
        let code = match e {
            Tp2Error::Parse { .. } | Tp2Error::RaggedRow { .. } => EXIT_PARSE,
            _ => EXIT_DOMAIN,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_VIOLATION,
            message: format!("i/o error: {e}"),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure {
            code: EXIT_VIOLATION,
            message: format!("csv error: {e}"),
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_PARSE
                }
            };
        }
    };
    let format = cli.format;
    match execute(cli.command, err).and_then(|o| emit(&o, format, out).map(|_| o.code)) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn emit(outcome: &Outcome, format: Format, out: &mut dyn Write) -> Result<(), Failure> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &outcome.envelope).map_err(|e| Failure {
                code: EXIT_VIOLATION,
                message: e.to_string(),
            })?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(&outcome.table.headers)?;
            for row in &outcome.table.rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn execute(command: Command, err: &mut (dyn Write + Send)) -> Result<Outcome, Failure> {
    match command {
        Command::Count(args) => cmd_count(args),
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Sequence(args) => cmd_sequence(args),
        Command::Verify(args) => Ok(cmd_verify(args, err)),
        Command::Tp2(sub) => cmd_tp2(sub),
    }
}

fn params(pairs: Vec<(&str, Value)>) -> BTreeMap<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn grid_params(grid: &GridArgs) -> Vec<(&'static str, Value)> {
    vec![
        ("m", json!(grid.m)),
        ("n", json!(grid.n)),
        ("partition", json!(grid.partition)),
    ]
}

fn region(grid: &GridArgs) -> Result<GridRegion, Failure> {
    let lambda: Partition = grid.partition.parse()?;
    Ok(GridRegion::new(grid.m, grid.n, lambda)?)
}

fn envelope(command: &str, parameters: BTreeMap<String, Value>, results: Value) -> Envelope {
    Envelope {
        schema_version: SCHEMA_VERSION,
        command: command.to_string(),
        parameters,
        results,
        violations: Vec::new(),
    }
}

fn cmd_count(args: CountArgs) -> Result<Outcome, Failure> {
    let region = region(&args.grid)?;
    let (engine, count) = match args.engine {
        Engine::Dp => {
            let memory = if args.full_table {
                DpMemory::FullTable
            } else {
                DpMemory::Rolling
            };
            ("dp", count_dp_with(&region, memory).into_inner())
        }
        Engine::Recursive => ("recursive", count_recursive(&region).into_inner()),
        Engine::Enumerate => (
            "enumerate",
            enumerate_paths(&region, args.cap)?.len().into(),
        ),
    };
    let count = count.to_string();
    let mut p = grid_params(&args.grid);
    p.push(("engine", json!(engine)));
    if args.engine == Engine::Enumerate {
        p.push(("cap", json!(args.cap)));
    }
    let table = Table {
        headers: vec!["m", "n", "partition", "engine", "count"],
        rows: vec![vec![
            args.grid.m.to_string(),
            args.grid.n.to_string(),
            args.grid.partition.clone(),
            engine.to_string(),
            count.clone(),
        ]],
    };
    let results = json!({ "count": count, "digits": count.len() });
    Ok(Outcome {
        envelope: envelope("count", params(p), results),
        table,
        code: EXIT_OK,
    })
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<Outcome, Failure> {
    let region = region(&args.grid)?;
    let paths: Vec<String> = enumerate_paths(&region, args.cap)?
        .iter()
        .map(ToString::to_string)
        .collect();
    let mut p = grid_params(&args.grid);
    p.push(("cap", json!(args.cap)));
    let table = Table {
        headers: vec!["index", "path"],
        rows: paths
            .iter()
            .enumerate()
            .map(|(i, s)| vec![i.to_string(), s.clone()])
            .collect(),
    };
    let results = json!({ "count": paths.len().to_string(), "paths": paths });
    Ok(Outcome {
        envelope: envelope("enumerate", params(p), results),
        table,
        code: EXIT_OK,
    })
}

fn cmd_sequence(args: SequenceArgs) -> Result<Outcome, Failure> {
    let lambda: Partition = args.partition.parse()?;
    let seq = simion::simion_sequence(&lambda, args.ell);
    let positive = seq.as_positive();
    let values: Vec<String> = seq.values().iter().map(ToString::to_string).collect();
    let grids: Vec<[usize; 2]> = (0..=args.ell).map(|i| seq.grid(i).into()).collect();

    let mut results = json!({ "values": values, "grids": grids });
    let mut violations = Vec::new();
    let checks: Vec<&str> = args
        .checks
        .iter()
        .map(|c| match c {
            Check::LogConcave => "log-concave",
            Check::Unimodal => "unimodal",
        })
        .collect();
    for check in &args.checks {
        let (key, witness) = match check {
            Check::LogConcave => ("log_concave", positive.log_concavity_violation()),
            Check::Unimodal => ("unimodal", positive.unimodality_violation()),
        };
        results[key] = json!(witness.is_none());
        if let Some(index) = witness {
            violations.push(json!({
                "kind": key,
                "partition": args.partition,
                "ell": args.ell,
                "values": values,
                "index": index,
            }));
        }
    }
    let table = Table {
        headers: vec!["index", "m", "n", "value"],
        rows: grids
            .iter()
            .zip(&values)
            .enumerate()
            .map(|(i, (g, v))| vec![i.to_string(), g[0].to_string(), g[1].to_string(), v.clone()])
            .collect(),
    };
    let p = params(vec![
        ("partition", json!(args.partition)),
        ("ell", json!(args.ell)),
        ("checks", json!(checks)),
    ]);
    let code = if violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    };
    let mut env = envelope("sequence", p, results);
    env.violations = violations;
    Ok(Outcome {
        envelope: env,
        table,
        code,
    })
}

fn cmd_verify(args: VerifyArgs, err: &mut (dyn Write + Send)) -> Outcome {
    let mode = match args.mode {
        Mode::Exhaustive => SweepMode::Exhaustive,
        Mode::Random => SweepMode::Random {
            seed: args.seed.expect("clap requires --seed in random mode"),
            samples: args
                .samples
                .expect("clap requires --samples in random mode"),
        },
    };
    let scope = match args.what {
        What::Theorem => SweepScope::Theorem,
        What::Chain => SweepScope::Chain,
        What::All => SweepScope::All,
    };
    let config = SweepConfig {
        box_m: args.box_m,
        box_n: args.box_n,
        ell_max: args.ell_max,
        mode,
        scope,
    };
    let report = if args.progress {
        let err = Mutex::new(err);
        simion::sweep_with_progress(&config, |done, total| {
            let step = (total / 20).max(1);
            if done % step == 0 || done == total {
                if let Ok(mut e) = err.lock() {
                    let _ = writeln!(e, "progress: {done}/{total} tasks");
                }
            }
        })
    } else {
        simion::sweep(&config)
    };

    let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
    let flag = |v: Option<bool>| v.map(|x| x.to_string()).unwrap_or_default();
    let rows = report
        .instances
        .iter()
        .map(|r| {
            vec![
                serde_json::to_value(r.kind)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default(),
                r.partition.clone(),
                opt(r.ell),
                opt(r.m),
                opt(r.n),
                r.values.clone(),
                flag(r.log_concave),
                flag(r.unimodal),
                r.inequalities_checked.to_string(),
                r.inequalities_skipped.to_string(),
                r.violation.to_string(),
            ]
        })
        .collect();
    let table = Table {
        headers: vec![
            "kind",
            "partition",
            "ell",
            "m",
            "n",
            "values",
            "log_concave",
            "unimodal",
            "inequalities_checked",
            "inequalities_skipped",
            "violation",
        ],
        rows,
    };
    let p = params(vec![
        ("box_m", json!(args.box_m)),
        ("box_n", json!(args.box_n)),
        ("ell_max", json!(args.ell_max)),
        (
            "mode",
            json!(match args.mode {
                Mode::Exhaustive => "exhaustive",
                Mode::Random => "random",
            }),
        ),
        ("seed", json!(args.seed)),
        ("samples", json!(args.samples)),
        (
            "what",
            json!(match args.what {
                What::Theorem => "theorem",
                What::Chain => "chain",
                What::All => "all",
            }),
        ),
    ]);
    let results = json!({ "totals": report.totals, "instances": report.instances });
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| serde_json::to_value(v).expect("violations serialize"))
        .collect();
    let code = if violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    };
    let mut env = envelope("verify", p, results);
    env.violations = violations;
    Outcome {
        envelope: env,
        table,
        code,
    }
}

fn strings<T: ToString>(values: &[T]) -> Vec<String> {
    values.iter().map(ToString::to_string).collect()
}

fn matrix_json(m: &MatrixNN) -> Value {
    json!(m.to_rows().iter().map(|r| strings(r)).collect::<Vec<_>>())
}

fn kv_table(results: &Value) -> Table {
    let rows = results
        .as_object()
        .map(|o| {
            o.iter()
                .map(|(k, v)| {
                    let text = match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    vec![k.clone(), text]
                })
                .collect()
        })
        .unwrap_or_default();
    Table {
        headers: vec!["field", "value"],
        rows,
    }
}

fn cmd_tp2(sub: Tp2Command) -> Result<Outcome, Failure> {
    let (name, p, results, violations, code) = match sub {
        Tp2Command::CheckMatrix { matrix } => {
            let m: MatrixNN = matrix.parse()?;
            let witness = m.negative_minor();
            let results = json!({
                "matrix": matrix_json(&m),
                "tp2": witness.is_none(),
                "negative_minor": witness,
            });
            (
                "check-matrix",
                vec![("matrix", json!(matrix))],
                results,
                Vec::new(),
                EXIT_OK,
            )
        }
        Tp2Command::LiftSequence { sequence } => {
            let x: PositiveSequence = sequence.parse()?;
            let lifted = x.two_row_lift();
            let witness = lifted.negative_minor();
            let results = json!({
                "matrix": matrix_json(&lifted),
                "tp2": witness.is_none(),
                "negative_minor": witness,
                "log_concave": x.is_log_concave(),
            });
            (
                "lift-sequence",
                vec![("sequence", json!(sequence))],
                results,
                Vec::new(),
                EXIT_OK,
            )
        }
        Tp2Command::CorollaryI { a, x } => {
            let pair = SequencePair::new(parse_naturals(&a, &a)?, parse_naturals(&x, &x)?)?;
            let p = vec![("a", json!(a)), ("x", json!(x))];
            let mut results = json!({
                "a_sums": strings(pair.a_sums()),
                "x_sums": strings(pair.x_sums()),
            });
            let mut violations = Vec::new();
            let code = if let Some(i) = pair.ratio_dominance_violation() {
                results["precondition_holds"] = json!(false);
                results["precondition_violation"] = json!({
                    "index": i,
                    "lhs": (&pair.a()[i] * &pair.x()[i + 1]).to_string(),
                    "rhs": (&pair.a()[i + 1] * &pair.x()[i]).to_string(),
                });
                EXIT_DOMAIN
            } else {
                results["precondition_holds"] = json!(true);
                let broken = pair.partial_sum_dominance_violation();
                results["conclusion_holds"] = json!(broken.is_none());
                if let Some(m) = broken {
                    violations.push(json!({
                        "kind": "partial_sum_dominance",
                        "index": m,
                        "lhs": (&pair.a_sums()[m] * &pair.x_sums()[m + 1]).to_string(),
                        "rhs": (&pair.a_sums()[m + 1] * &pair.x_sums()[m]).to_string(),
                    }));
                    EXIT_VIOLATION
                } else {
                    EXIT_OK
                }
            };
            ("corollary-i", p, results, violations, code)
        }
        Tp2Command::CorollaryIi { sequence } => {
            let x: PositiveSequence = sequence.parse()?;
            let sums = x.partial_sums();
            let mut results = json!({ "partial_sums": strings(sums.values()) });
            let mut violations = Vec::new();
            let code = match x.partial_sums_preserve_log_concavity() {
                Err(Tp2Error::PreconditionViolated { index }) => {
                    results["precondition_holds"] = json!(false);
                    results["precondition_violation"] = json!({
                        "index": index,
                        "lhs": (&x.values()[index - 1] * &x.values()[index + 1]).to_string(),
                        "rhs": (&x.values()[index] * &x.values()[index]).to_string(),
                    });
                    EXIT_DOMAIN
                }
                Err(e) => return Err(e.into()),
                Ok(holds) => {
                    results["precondition_holds"] = json!(true);
                    results["conclusion_holds"] = json!(holds);
                    if let Some(index) = sums.log_concavity_violation() {
                        violations.push(
                            json!({ "kind": "partial_sums_not_log_concave", "index": index }),
                        );
                        EXIT_VIOLATION
                    } else {
                        EXIT_OK
                    }
                }
            };
            (
                "corollary-ii",
                vec![("sequence", json!(sequence))],
                results,
                violations,
                code,
            )
        }
    };
    let table = kv_table(&results);
    let mut env = envelope(&format!("tp2 {name}"), params(p), results);
    env.violations = violations;
    Ok(Outcome {
        envelope: env,
        table,
        code,
    })
}
