use std::error::Error;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::{Duration, Instant};

use hetwcrt::bounds::{PruneMode, SearchOptions};
use hetwcrt::experiments::{run_sweep, state_space_report, write_sweep_csv, BoundSet, SweepSpec, SweptParameter};
use hetwcrt::generator::{check_reduction, gen_task, reduction_campaign, CnfInstance, GenConfig};
use hetwcrt::io::TaskFile;
use hetwcrt::simulator::{self, check_work_conserving, ExecutionScenario, ExecutionSequence};
use hetwcrt::{AnalyzeOptions, Platform, TypedDag, Weight};
use serde_json::{json, Value};

use crate::{
    AnalyzeArgs, BenchArgs, BoundName, GenArgs, GenerateArgs, Preset, Prune, SatCheckArgs, SearchArgs, SimulateArgs,
    SweepName, ValidateArgs,
};

type Outcome = Result<ExitCode, Box<dyn Error>>;

const UNSCHEDULABLE: u8 = 2;

fn read_text(path: &Path) -> io::Result<String> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    }
}

fn read_task(path: &Path) -> Result<(TypedDag, Platform), Box<dyn Error>> {
    Ok(TaskFile::parse(&read_text(path)?)?.to_task()?)
}

/// Writes to stdout; a reader that closed the pipe early is not an error.
fn stdout(text: &str) -> io::Result<()> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        other => other,
    }
}

fn write_out(path: Option<&Path>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => stdout(text),
    }
}

fn print_json(value: &Value) -> io::Result<()> {
    stdout(&(serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n"))
}

/// `p/q (decimal)` for people; JSON output keeps only the exact form.
fn human(w: Weight) -> String {
    format!("{} ({})", w.to_fraction_string(), w.to_decimal_string(6))
}

fn search_options(args: &SearchArgs) -> SearchOptions {
    let prune = match (args.strict_paper, args.prune) {
        (true, _) | (_, Prune::StrictPaper) => PruneMode::StrictPaper,
        (_, Prune::Bidirectional) => PruneMode::Bidirectional,
        (_, Prune::Disabled) => PruneMode::Disabled,
    };
    SearchOptions {
        prune,
        max_retained: args.max_tuples,
        deadline: args.timeout.map(|s| Instant::now() + Duration::from_secs_f64(s)),
    }
}

fn bound_set(bounds: &[BoundName]) -> Result<BoundSet, Box<dyn Error>> {
    if bounds.is_empty() {
        return Err("no bounds selected".into());
    }
    Ok(BoundSet {
        old_b: bounds.contains(&BoundName::Old),
        new_b_1: bounds.contains(&BoundName::New1),
        new_b_2: bounds.contains(&BoundName::New2),
    })
}

pub fn analyze(args: AnalyzeArgs) -> Outcome {
    let (dag, platform) = read_task(&args.task)?;
    let wanted = bound_set(&args.bounds)?;
    let deadline = args.deadline.as_deref().map(Weight::from_str).transpose()?;
    let options = AnalyzeOptions {
        new_b_2: wanted.new_b_2,
        search: search_options(&args.search),
        count_paths: !args.no_path_count,
    };
    let report = hetwcrt::analyze(&dag, &platform, &options)?;

    let mut computed = Vec::new();
    if wanted.old_b {
        computed.push(("OLD-B", report.old_b));
    }
    if wanted.new_b_1 {
        computed.push(("NEW-B-1", report.new_b_1));
    }
    if let Some(b) = report.new_b_2 {
        computed.push(("NEW-B-2", b));
    }
    let tightest = computed.iter().map(|&(_, b)| b).min().expect("at least one bound");
    let schedulable = deadline.map(|d| tightest <= d);

    let mut out = serde_json::to_value(&report)?;
    let fields = out.as_object_mut().expect("report is an object");
    if !wanted.old_b {
        fields.remove("old_b");
        fields.remove("old_b_ns");
    }
    if !wanted.new_b_1 {
        fields.remove("new_b_1");
        fields.remove("new_b_1_ns");
    }
    fields.insert("tightest".into(), json!(tightest.to_fraction_string()));
    if let Some(d) = deadline {
        fields.insert("deadline".into(), json!(d.to_fraction_string()));
        fields.insert("schedulable".into(), json!(schedulable));
    }
    print_json(&out)?;

    if !args.quiet {
        for (name, b) in &computed {
            eprintln!("{name:<8} {}", human(*b));
        }
        if wanted.new_b_2 {
            eprintln!(
                "search   {} tuples generated, {} pruned, peak {} retained",
                report.tuples_generated, report.tuples_pruned, report.tuples_retained_peak
            );
        }
        if let Some(paths) = report.complete_path_count {
            eprintln!("paths    {paths} complete paths");
        }
        if let (Some(d), Some(ok)) = (deadline, schedulable) {
            let verdict = if ok { "schedulable" } else { "NOT schedulable" };
            eprintln!("verdict  {verdict} against deadline {}", human(d));
        }
    }
    Ok(match schedulable {
        Some(false) => ExitCode::from(UNSCHEDULABLE),
        _ => ExitCode::SUCCESS,
    })
}

fn run_seed(seed: u64, run: u64) -> u64 {
    seed ^ run.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

pub fn simulate(args: SimulateArgs) -> Outcome {
    if args.runs == 0 {
        return Err("--runs must be at least 1".into());
    }
    let (dag, platform) = read_task(&args.task)?;
    let dag = dag.normalize()?;
    let options = AnalyzeOptions {
        search: search_options(&args.search),
        count_paths: false,
        ..AnalyzeOptions::default()
    };
    let report = hetwcrt::analyze(&dag, &platform, &options)?;
    let bound = report.new_b_2.expect("NEW-B-2 requested");

    let mut worst: Option<(u64, ExecutionSequence)> = None;
    for run in 0..args.runs {
        let scenario = if run == 0 {
            ExecutionScenario::full_wcet(&dag)
        } else {
            ExecutionScenario::random(&dag, run_seed(args.seed, run))
        };
        let seq = simulator::simulate(&dag, &platform, &scenario)?;
        if worst.as_ref().is_none_or(|(_, w)| seq.response_time > w.response_time) {
            worst = Some((run, seq));
        }
    }
    let (worst_run, worst) = worst.expect("at least one run");
    if let Some(path) = &args.emit_worst {
        fs::write(path, worst.to_json())?;
    }
    if let Some(path) = &args.emit_worst_csv {
        fs::write(path, worst.to_csv())?;
    }
    let within = worst.response_time <= bound;
    print_json(&json!({
        "runs": args.runs,
        "seed": args.seed,
        "max_response_time": worst.response_time.to_fraction_string(),
        "worst_run": worst_run,
        "old_b": report.old_b.to_fraction_string(),
        "new_b_1": report.new_b_1.to_fraction_string(),
        "new_b_2": bound.to_fraction_string(),
        "within_new_b_2": within,
    }))?;
    eprintln!(
        "max observed {} over {} runs; NEW-B-2 {}",
        human(worst.response_time),
        args.runs,
        human(bound)
    );
    if !within {
        return Err(format!("observed response time {} exceeds NEW-B-2 {bound}", worst.response_time).into());
    }
    Ok(ExitCode::SUCCESS)
}

fn range<T: FromStr + Copy>(text: &str) -> Result<(T, T), Box<dyn Error>>
where
    T::Err: Error + 'static,
{
    let parse = |s: &str| s.trim().parse::<T>().map_err(|e| format!("bad range {text:?}: {e}"));
    Ok(match text.split_once("..") {
        Some((lo, hi)) => (parse(lo)?, parse(hi)?),
        None => {
            let v = parse(text)?;
            (v, v)
        }
    })
}

fn gen_config(args: &GenArgs) -> Result<GenConfig, Box<dyn Error>> {
    let mut config = match args.preset {
        Preset::Desk => GenConfig::desk(),
        Preset::Full => GenConfig::default(),
    };
    if let Some(v) = &args.vertices {
        config.vertex_range = range(v)?;
    }
    if let Some(v) = &args.pr {
        config.pr_range = range(v)?;
    }
    if let Some(v) = &args.types {
        config.type_count_range = range(v)?;
    }
    if let Some(v) = &args.cores {
        config.cores_range = range(v)?;
    }
    if let Some(v) = &args.utilization {
        config.utilization_range = range(v)?;
    }
    if let Some(v) = &args.period {
        config.period = v.parse()?;
    }
    config.seed = args.seed;
    config.validate()?;
    Ok(config)
}

pub fn generate(args: GenerateArgs) -> Outcome {
    let config = gen_config(&args.generator)?;
    let (dag, platform) = gen_task(&config);
    let mut text = TaskFile::from_task(&dag, &platform).to_json();
    text.push('\n');
    write_out(args.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn default_values(parameter: SweptParameter, preset: Preset) -> Vec<f64> {
    match (parameter, preset) {
        (SweptParameter::Utilization, _) => vec![1.0, 1.5, 2.0, 2.5, 3.0],
        (SweptParameter::Vertices, Preset::Desk) => vec![20.0, 30.0, 40.0, 50.0, 60.0],
        (SweptParameter::Vertices, Preset::Full) => vec![70.0, 80.0, 90.0, 100.0],
        (SweptParameter::Pr, _) => vec![0.02, 0.05, 0.08, 0.1, 0.15, 0.2],
        (SweptParameter::Types, Preset::Desk) => vec![2.0, 3.0, 4.0, 5.0],
        (SweptParameter::Types, Preset::Full) => vec![5.0, 6.0, 7.0, 8.0, 9.0, 10.0],
        (SweptParameter::Cores, _) => vec![2.0, 4.0, 6.0, 8.0, 10.0],
    }
}

fn summary_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

pub fn bench(args: BenchArgs) -> Outcome {
    let base = gen_config(&args.generator)?;
    if args.state_space {
        let report = state_space_report(&base, args.trials, STATE_SPACE_PATH_LIMIT)?;
        let text = serde_json::to_string_pretty(&report)? + "\n";
        write_out(args.out.as_deref(), &text)?;
        return Ok(ExitCode::SUCCESS);
    }
    let parameter = match args.sweep.ok_or("--sweep or --state-space is required")? {
        SweepName::U => SweptParameter::Utilization,
        SweepName::V => SweptParameter::Vertices,
        SweepName::Pr => SweptParameter::Pr,
        SweepName::S => SweptParameter::Types,
        SweepName::M => SweptParameter::Cores,
    };
    let values = if args.values.is_empty() {
        default_values(parameter, args.generator.preset)
    } else {
        args.values.clone()
    };
    let mut spec = SweepSpec::new(parameter, values, args.trials, base);
    spec.bounds = bound_set(&args.bounds)?;
    spec.time_budget = args.time_budget.map(Duration::from_secs_f64);
    spec.workers = args.workers;
    let rows = run_sweep(&spec)?;

    let mut csv = Vec::new();
    write_sweep_csv(parameter, &rows, &mut csv)?;
    write_out(args.out.as_deref(), std::str::from_utf8(&csv)?)?;
    if let Some(out) = &args.out {
        let summary = json!({
            "parameter": parameter,
            "values": spec.values,
            "trials": spec.trials,
            "base": spec.base,
            "bounds": spec.bounds,
            "time_budget_secs": args.time_budget,
            "rows": rows,
        });
        fs::write(summary_path(out), serde_json::to_string_pretty(&summary)? + "\n")?;
    }
    Ok(ExitCode::SUCCESS)
}

/// Instances whose path count exceeds this are skipped.
const STATE_SPACE_PATH_LIMIT: u128 = 1 << 40;

pub fn sat_check(args: SatCheckArgs) -> Outcome {
    let outcomes = match &args.dimacs {
        Some(path) => vec![check_reduction(&CnfInstance::parse_dimacs(&read_text(path)?)?)?],
        None => reduction_campaign(args.vars, args.clauses, args.trials, args.seed, !args.allow_tautologies)?,
    };
    let agreements = outcomes.iter().filter(|o| o.agrees).count();
    let satisfiable = outcomes.iter().filter(|o| o.satisfiable).count();
    let disagreements: Vec<_> = outcomes.iter().enumerate().filter(|(_, o)| !o.agrees).collect();
    print_json(&json!({
        "trials": outcomes.len(),
        "agreements": agreements,
        "satisfiable": satisfiable,
        "unsatisfiable": outcomes.len() - satisfiable,
        "disagreements": disagreements
            .iter()
            .map(|(i, o)| json!({ "instance": i, "outcome": o }))
            .collect::<Vec<_>>(),
    }))?;
    eprintln!("{agreements}/{} iff-agreements", outcomes.len());
    Ok(if agreements == outcomes.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(UNSCHEDULABLE)
    })
}

pub fn validate(args: ValidateArgs) -> Outcome {
    let (dag, platform) = read_task(&args.task)?;
    let normalized = dag.normalize()?;
    let mut out = json!({
        "vertices": dag.vertex_count(),
        "edges": dag.edge_count(),
        "types": platform.type_count(),
        "platform": platform.core_counts(),
        "sources": dag.sources().len(),
        "sinks": dag.sinks().len(),
        "normalized_vertices": normalized.vertex_count(),
        "volume": dag.vol().to_fraction_string(),
        "longest_path": dag.longest_path().to_fraction_string(),
        "complete_paths": normalized.count_complete_paths().map(|c| c.to_string()),
    });
    let mut code = ExitCode::SUCCESS;
    if let Some(path) = &args.sequence {
        let seq: ExecutionSequence = serde_json::from_str(&read_text(path)?)?;
        let verdict = check_work_conserving(&normalized, &platform, &seq);
        out["sequence_valid"] = json!(verdict.is_ok());
        if let Err(v) = verdict {
            out["violation"] = json!(format!("{v:?}"));
            code = ExitCode::from(UNSCHEDULABLE);
        }
    }
    print_json(&out)?;
    Ok(code)
}
