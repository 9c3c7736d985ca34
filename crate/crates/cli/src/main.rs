use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use testset::analysis::{full_report, theorem_ratio_expr, trace_potential, ReportOptions};
use testset::exact::{solve_exact, ExactOutcome};
use testset::generators::GenSpec;
use testset::model::{is_r_test_set, Instance};
use testset::multicover::reduce;
use testset::sga::{run_sga_with, SgaStep, TieBreak};
use testset::sweep::{run_sweep, write_csv, SweepConfig};
use testset::Error;

const EXIT_FAILURE: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(
    name = "testset",
    version,
    about = "Test set with redundancy: greedy, exact and bound analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the greedy algorithm and write the solution with its trace.
    Solve(SolveArgs),
    /// Compute a certified optimum with the exact oracle.
    Exact(OracleArgs),
    /// Evaluate every bound against the greedy and exact solutions.
    Bounds(BoundsArgs),
    /// Trace the potential function along the greedy run.
    Trace(OracleArgs),
    /// Generate an instance from a generator spec file.
    Gen(GenArgs),
    /// Batch experiment over seeded random instances.
    Sweep(SweepArgs),
    /// Export the set multicover reduction of an instance.
    Reduce(IoArgs),
    /// Balance the two ratio bounds for given n and r.
    Balance(BalanceArgs),
}

#[derive(Args)]
struct IoArgs {
    /// Instance JSON file.
    #[arg(long)]
    input: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Override the instance's redundancy.
    #[arg(long)]
    r: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TieBreakMode {
    Lowest,
    Seeded,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    io: IoArgs,
    #[arg(long, value_enum, default_value = "lowest")]
    tie_break: TieBreakMode,
    /// Seed for seeded tie-breaking.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Search-node limit for the exact oracle (0 gives up immediately).
    #[arg(long, default_value_t = 10_000_000)]
    oracle_budget: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    oracle: OracleArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    skip_oracle: bool,
}

#[derive(Args)]
struct GenArgs {
    /// Generator spec JSON file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Override the spec's seed (random kind).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    r: Option<u32>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 4)]
    n_min: usize,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    /// Test counts, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "10")]
    t: Vec<usize>,
    /// Redundancy values, comma separated.
    #[arg(long = "r", value_delimiter = ',', default_value = "1,2,3")]
    r_values: Vec<u32>,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Instances per (n, t, r) cell.
    #[arg(long, default_value_t = 10)]
    seeds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000_000)]
    oracle_budget: u64,
    #[arg(long)]
    skip_oracle: bool,
    #[arg(long, default_value_t = 1000)]
    max_attempts: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BalanceArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: u32,
}

enum Failure {
    Lib(Error),
    Budget(String),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

type CmdResult = Result<(), Failure>;

fn load_instance(io: &IoArgs) -> Result<Instance, Failure> {
    let text = fs::read_to_string(&io.input)?;
    let inst = Instance::from_json(&text).map_err(|e| match e {
        Error::Parse(p) => Error::InvalidInstance {
            field: io.input.display().to_string(),
            reason: p.to_string(),
        },
        other => other,
    })?;
    Ok(match io.r {
        Some(r) => inst.with_r(r)?,
        None => inst,
    })
}

fn emit(output: Option<&Path>, text: &str) -> CmdResult {
    match output {
        Some(path) => fs::write(path, text)?,
        None => println!("{}", text.trim_end()),
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    picks: &'a [usize],
    size: usize,
    trace: &'a [SgaStep],
}

fn cmd_solve(args: &SolveArgs) -> CmdResult {
    let inst = load_instance(&args.io)?;
    let tie_break = match args.tie_break {
        TieBreakMode::Lowest => TieBreak::LowestIndex,
        TieBreakMode::Seeded => TieBreak::Seeded(args.seed),
    };
    let trace = run_sga_with(&inst, tie_break)?;
    if !is_r_test_set(&trace.solution, &inst) {
        return Err(Failure::Invalid(
            "greedy output is not an r-test set".into(),
        ));
    }
    let out = SolveOutput {
        picks: trace.solution.picks(),
        size: trace.len(),
        trace: &trace.steps,
    };
    emit(args.io.output.as_deref(), &to_json(&out))
}

fn cmd_exact(args: &OracleArgs) -> CmdResult {
    let inst = load_instance(&args.io)?;
    match solve_exact(&inst, Some(args.oracle_budget))? {
        ExactOutcome::Optimal(cert) => {
            if !is_r_test_set(&cert.witness, &inst) {
                return Err(Failure::Invalid("witness is not an r-test set".into()));
            }
            emit(args.io.output.as_deref(), &to_json(&cert))
        }
        ExactOutcome::Unknown { nodes, lower_bound } => Err(Failure::Budget(format!(
            "oracle budget exhausted after {nodes} nodes; m* >= {lower_bound}"
        ))),
    }
}

fn cmd_bounds(args: &BoundsArgs) -> CmdResult {
    let inst = load_instance(&args.oracle.io)?;
    let options = ReportOptions {
        oracle_budget: Some(args.oracle.oracle_budget),
        skip_oracle: args.skip_oracle,
        ..Default::default()
    };
    let report = full_report(&inst, &options)?;
    let text = match args.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let opt = |v: Option<String>| v.unwrap_or_default();
            let mut header = vec![
                "n",
                "t",
                "r",
                "hash_0",
                "m_star",
                "hash_b",
                "rho1",
                "rho2",
                "lemma1_bound",
                "lemma2_size_bound",
                "theorem_expr",
                "sga_size",
                "ratio",
                "assertions_passed",
            ];
            header.extend(report.checks.iter().map(|c| c.name));
            let mut row = vec![
                report.n.to_string(),
                report.t.to_string(),
                report.r.to_string(),
                report.hash_0.to_string(),
                opt(report.m_star.map(|v| v.to_string())),
                opt(report.hash_b.map(|v| v.to_string())),
                opt(report.rho1.map(|v| v.to_string())),
                opt(report.rho2.map(|v| v.to_string())),
                opt(report.lemma1_bound.map(|v| v.to_string())),
                opt(report.lemma2_size_bound.map(|v| v.to_string())),
                report.theorem_expr.to_string(),
                report.sga_size.to_string(),
                opt(report.ratio.map(|v| v.to_string())),
                report.overall().as_str().to_string(),
            ];
            row.extend(report.checks.iter().map(|c| c.status.as_str().to_string()));
            w.write_record(&header).map_err(Error::from)?;
            w.write_record(&row).map_err(Error::from)?;
            String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
        }
    };
    emit(args.oracle.io.output.as_deref(), &text)
}

#[derive(Serialize)]
struct SkippedTrace {
    skipped: String,
}

fn cmd_trace(args: &OracleArgs) -> CmdResult {
    let inst = load_instance(&args.io)?;
    let trace = run_sga_with(&inst, TieBreak::LowestIndex)?;
    let cert = match solve_exact(&inst, Some(args.oracle_budget))? {
        ExactOutcome::Optimal(c) => c,
        ExactOutcome::Unknown { nodes, .. } => {
            return Err(Failure::Budget(format!(
                "oracle budget exhausted after {nodes} nodes"
            )))
        }
    };
    let text = match trace_potential(&trace, &cert, &inst) {
        Ok(p) => to_json(&p),
        Err(e @ Error::Degenerate { .. }) => to_json(&SkippedTrace {
            skipped: e.to_string(),
        }),
        Err(e) => return Err(e.into()),
    };
    emit(args.io.output.as_deref(), &text)
}

fn cmd_gen(args: &GenArgs) -> CmdResult {
    let text = fs::read_to_string(&args.input)?;
    let mut spec = GenSpec::from_json(&text)?;
    match &mut spec {
        GenSpec::Random { seed, r, .. } => {
            if let Some(s) = args.seed {
                *seed = s;
            }
            if let Some(v) = args.r {
                *r = v;
            }
        }
        GenSpec::Barcode { r, .. } => {
            if let Some(v) = args.r {
                *r = v;
            }
        }
    }
    let inst = spec.generate()?;
    if !inst.is_feasible() {
        eprintln!("warning: generated instance is infeasible");
    }
    emit(args.output.as_deref(), &format!("{}\n", inst.to_json()))
}

fn cmd_sweep(args: &SweepArgs) -> CmdResult {
    let config = SweepConfig {
        n_values: (args.n_min..=args.n_max).collect(),
        t_values: args.t.clone(),
        r_values: args.r_values.clone(),
        p: args.p,
        seeds: args.seeds,
        base_seed: args.seed,
        oracle_budget: Some(args.oracle_budget),
        skip_oracle: args.skip_oracle,
        max_attempts: args.max_attempts,
        ..Default::default()
    };
    let entries = run_sweep(&config)?;
    let text = match args.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&entries, &mut buf)?;
            String::from_utf8(buf).expect("utf-8")
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row<'a> {
                seed: u64,
                instance: serde_json::Value,
                report: Result<&'a testset::analysis::BoundsReport, &'a String>,
            }
            let rows: Vec<Row> = entries
                .iter()
                .map(|e| Row {
                    seed: e.seed,
                    instance: serde_json::from_str(&e.instance.to_json()).expect("valid json"),
                    report: e.report.as_ref(),
                })
                .collect();
            to_json(&rows)
        }
    };
    emit(args.output.as_deref(), &text)
}

fn cmd_reduce(args: &IoArgs) -> CmdResult {
    let inst = load_instance(args)?;
    emit(
        args.output.as_deref(),
        &format!("{}\n", reduce(&inst).to_json()),
    )
}

fn cmd_balance(args: &BalanceArgs) -> CmdResult {
    let rep = theorem_ratio_expr(args.n, args.r)?;
    emit(None, &to_json(&rep))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Exact(a) => cmd_exact(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Trace(a) => cmd_trace(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Balance(a) => cmd_balance(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Infeasible(_) => EXIT_INFEASIBLE,
                Error::Parse(_) | Error::InvalidInstance { .. } | Error::InvalidSpec(_) => {
                    EXIT_PARSE
                }
                _ => EXIT_FAILURE,
            })
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_BUDGET)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}
