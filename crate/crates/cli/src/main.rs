//! `hetwcrt`: response-time analysis of typed DAG tasks on heterogeneous
//! multi-core platforms.
//!
//! Exit codes: 0 schedulable (or success), 2 unschedulable (or a failed
//! self-check), 1 on any error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "hetwcrt",
    version,
    about = "Response-time bounds for typed DAG tasks on heterogeneous multi-cores"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute response-time bounds for a task file.
    Analyze(AnalyzeArgs),
    /// Simulate random schedules and compare them with the bounds.
    Simulate(SimulateArgs),
    /// Generate a random task file.
    Generate(GenerateArgs),
    /// Run a parameter sweep and write CSV.
    Bench(BenchArgs),
    /// Check the 3-SAT reduction against a truth-table solver.
    SatCheck(SatCheckArgs),
    /// Check a task file, and optionally an execution trace against it.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BoundName {
    Old,
    New1,
    New2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Prune {
    Bidirectional,
    StrictPaper,
    Disabled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Preset {
    /// Up to 60 vertices and 5 types.
    Desk,
    /// 70 to 100 vertices and 5 to 10 types.
    Full,
}

#[derive(Args)]
struct SearchArgs {
    /// Pruning used by the exact NEW-B-2 search.
    #[arg(long, value_enum, default_value = "bidirectional")]
    prune: Prune,
    /// Shorthand for `--prune strict-paper`.
    #[arg(long, conflicts_with = "prune")]
    strict_paper: bool,
    /// Maximum number of tuples held at once.
    #[arg(long, default_value_t = hetwcrt::bounds::DEFAULT_MAX_RETAINED)]
    max_tuples: usize,
    /// Time budget for NEW-B-2, in seconds.
    #[arg(long)]
    timeout: Option<f64>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Task file (JSON), or `-` for stdin.
    task: PathBuf,
    /// Bounds to compute.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "old,new1,new2")]
    bounds: Vec<BoundName>,
    /// Deadline for the schedulability verdict, e.g. `100` or `199/2`.
    #[arg(long)]
    deadline: Option<String>,
    #[command(flatten)]
    search: SearchArgs,
    /// Skip counting complete paths.
    #[arg(long)]
    no_path_count: bool,
    /// Print only the JSON report.
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Args)]
struct SimulateArgs {
    task: PathBuf,
    /// Number of runs; the first runs every vertex for its full WCET.
    #[arg(long, default_value_t = 100)]
    runs: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the slowest execution sequence as JSON.
    #[arg(long)]
    emit_worst: Option<PathBuf>,
    /// Write the slowest execution sequence as CSV.
    #[arg(long)]
    emit_worst_csv: Option<PathBuf>,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args, Clone)]
struct GenArgs {
    #[arg(long, value_enum, default_value = "desk")]
    preset: Preset,
    /// Vertex count before dummy source and sink are added, `N` or `MIN..MAX`.
    #[arg(long)]
    vertices: Option<String>,
    /// Edge probability, `P` or `MIN..MAX`.
    #[arg(long)]
    pr: Option<String>,
    /// Number of core types, `N` or `MIN..MAX`.
    #[arg(long)]
    types: Option<String>,
    /// Cores per type, `N` or `MIN..MAX`.
    #[arg(long)]
    cores: Option<String>,
    /// Utilization, `U` or `MIN..MAX`.
    #[arg(long)]
    utilization: Option<String>,
    /// Period; total WCET is utilization times period.
    #[arg(long)]
    period: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    generator: GenArgs,
    /// Output path; stdout when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SweepName {
    #[value(name = "U", alias = "u")]
    U,
    #[value(name = "V", alias = "v")]
    V,
    #[value(name = "pr")]
    Pr,
    #[value(name = "S", alias = "s")]
    S,
    #[value(name = "M", alias = "m")]
    M,
}

#[derive(Args)]
struct BenchArgs {
    /// Parameter to sweep.
    #[arg(long, value_enum)]
    sweep: Option<SweepName>,
    /// Values of the swept parameter, comma separated.
    #[arg(long, value_delimiter = ',')]
    values: Vec<f64>,
    /// Instances per value.
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "old,new1,new2")]
    bounds: Vec<BoundName>,
    /// Time budget per NEW-B-2 run, in seconds.
    #[arg(long)]
    time_budget: Option<f64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "HETWCRT_WORKERS", default_value_t = 0)]
    workers: usize,
    /// Report tuples generated against complete paths instead of a sweep.
    #[arg(long, conflicts_with = "sweep")]
    state_space: bool,
    /// CSV output path; stdout when absent. A JSON summary is written next to it.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[command(flatten)]
    generator: GenArgs,
}

#[derive(Args)]
struct SatCheckArgs {
    #[arg(long, default_value_t = 4)]
    vars: usize,
    #[arg(long, default_value_t = 6)]
    clauses: usize,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Check a single DIMACS file instead of random instances.
    #[arg(long)]
    dimacs: Option<PathBuf>,
    /// Let random clauses contain both `x` and `¬x`.
    #[arg(long)]
    allow_tautologies: bool,
}

#[derive(Args)]
struct ValidateArgs {
    task: PathBuf,
    /// Execution sequence JSON to check for precedence, core exclusivity and
    /// work conservation. Vertex ids refer to the normalized graph.
    #[arg(long)]
    sequence: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match cli.command {
        Command::Analyze(a) => commands::analyze(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Generate(a) => commands::generate(a),
        Command::Bench(a) => commands::bench(a),
        Command::SatCheck(a) => commands::sat_check(a),
        Command::Validate(a) => commands::validate(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
