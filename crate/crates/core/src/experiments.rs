//! Parameter sweeps over generated workloads: acceptance ratios, bounds
//! normalized to OLD-B, analysis times, and the number of search tuples
//! compared with the number of complete paths.

use std::io::Write;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, PreparedTask, SearchOptions};
use crate::error::{Error, Result};
use crate::generator::{gen_task, GenConfig};
use crate::graph::{Platform, TypedDag};
use crate::weight::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweptParameter {
    Utilization,
    Vertices,
    Pr,
    Types,
    Cores,
}

impl SweptParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweptParameter::Utilization => "U",
            SweptParameter::Vertices => "V",
            SweptParameter::Pr => "pr",
            SweptParameter::Types => "S",
            SweptParameter::Cores => "M",
        }
    }

    /// Pins the parameter to `value` in a copy of `base`.
    pub fn apply(self, base: &GenConfig, value: f64) -> GenConfig {
        let mut config = base.clone();
        match self {
            SweptParameter::Utilization => config.utilization_range = (value, value),
            SweptParameter::Vertices => config.vertex_range = (value as usize, value as usize),
            SweptParameter::Pr => config.pr_range = (value, value),
            SweptParameter::Types => config.type_count_range = (value as usize, value as usize),
            SweptParameter::Cores => config.cores_range = (value as u32, value as u32),
        }
        config
    }
}

impl std::str::FromStr for SweptParameter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "U" | "u" | "utilization" => Ok(SweptParameter::Utilization),
            "V" | "v" | "vertices" => Ok(SweptParameter::Vertices),
            "pr" | "p_r" => Ok(SweptParameter::Pr),
            "S" | "s" | "types" => Ok(SweptParameter::Types),
            "M" | "m" | "cores" => Ok(SweptParameter::Cores),
            other => Err(Error::Parse(format!("unknown sweep parameter {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundSet {
    pub old_b: bool,
    pub new_b_1: bool,
    pub new_b_2: bool,
}

impl Default for BoundSet {
    fn default() -> Self {
        BoundSet {
            old_b: true,
            new_b_1: true,
            new_b_2: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub parameter: SweptParameter,
    pub values: Vec<f64>,
    pub trials: usize,
    pub base: GenConfig,
    pub bounds: BoundSet,
    pub time_budget: Option<Duration>,
    pub workers: usize,
    /// Instances with more complete paths are reported without a path count.
    pub path_limit: u128,
}

impl SweepSpec {
    pub fn new(parameter: SweptParameter, values: Vec<f64>, trials: usize, base: GenConfig) -> Self {
        SweepSpec {
            parameter,
            values,
            trials,
            base,
            bounds: BoundSet::default(),
            time_budget: None,
            workers: 0,
            path_limit: u128::MAX,
        }
    }

    fn check(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::Parse("sweep has no values".into()));
        }
        if self.trials == 0 {
            return Err(Error::Parse("sweep needs at least one trial".into()));
        }
        for &v in &self.values {
            self.parameter.apply(&self.base, v).validate()?;
        }
        Ok(())
    }

    /// Seed of trial `trial` at value index `point`.
    pub fn instance_seed(&self, point: usize, trial: usize) -> u64 {
        splitmix(self.base.seed ^ splitmix(((point as u64) << 32) | trial as u64))
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Outcome of one generated instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceResult {
    pub seed: u64,
    pub old_b: Weight,
    pub new_b_1: Weight,
    /// `None` when disabled, timed out, or over the tuple limit.
    pub new_b_2: Option<Weight>,
    pub new_b_2_failed: bool,
    pub tuples_generated: u64,
    pub complete_paths: Option<u128>,
    pub old_b_secs: f64,
    pub new_b_1_secs: f64,
    pub new_b_2_secs: f64,
}

pub fn run_instance(
    dag: &TypedDag,
    platform: &Platform,
    seed: u64,
    bounds_enabled: BoundSet,
    time_budget: Option<Duration>,
    path_limit: u128,
) -> Result<InstanceResult> {
    let t = Instant::now();
    let old_b = bounds::old_b(dag, platform)?;
    let old_b_secs = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let new_b_1 = bounds::new_b_1(dag, platform)?;
    let new_b_1_secs = t.elapsed().as_secs_f64();
    let mut result = InstanceResult {
        seed,
        old_b,
        new_b_1,
        new_b_2: None,
        new_b_2_failed: false,
        tuples_generated: 0,
        complete_paths: dag.count_complete_paths().filter(|&c| c <= path_limit),
        old_b_secs,
        new_b_1_secs,
        new_b_2_secs: 0.0,
    };
    if bounds_enabled.new_b_2 {
        let t = Instant::now();
        let task = PreparedTask::new(dag.clone())?;
        let options = SearchOptions {
            deadline: time_budget.map(|b| t + b),
            ..SearchOptions::default()
        };
        match bounds::new_b_2_with(&task, platform, &options) {
            Ok((value, stats)) => {
                result.new_b_2 = Some(value);
                result.tuples_generated = stats.tuples_generated;
            }
            Err(Error::Timeout | Error::ResourceLimit { .. }) => result.new_b_2_failed = true,
            Err(e) => return Err(e),
        }
        result.new_b_2_secs = t.elapsed().as_secs_f64();
    }
    Ok(result)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub instances: usize,
    pub accept_old_b: Option<f64>,
    pub accept_new_b_1: Option<f64>,
    pub accept_new_b_2: Option<f64>,
    /// Mean of `bound / OLD-B`; OLD-B itself is 1.
    pub norm_new_b_1: Option<f64>,
    pub norm_new_b_2: Option<f64>,
    pub time_old_b_ms: f64,
    pub time_new_b_1_ms: f64,
    pub time_new_b_2_ms: Option<f64>,
    pub mean_tuples: Option<f64>,
    pub mean_complete_paths: Option<f64>,
    /// NEW-B-2 runs that hit the time budget or tuple limit. Those instances
    /// fall back to NEW-B-1, which is never smaller.
    pub new_b_2_failures: usize,
}

impl SweepRow {
    pub fn aggregate(value: f64, period: Weight, bounds: BoundSet, results: &[InstanceResult]) -> SweepRow {
        let n = results.len().max(1) as f64;
        let frac = |pred: &dyn Fn(&InstanceResult) -> bool| results.iter().filter(|r| pred(r)).count() as f64 / n;
        let mean = |f: &dyn Fn(&InstanceResult) -> f64| results.iter().map(f).sum::<f64>() / n;
        let b2 = |r: &InstanceResult| r.new_b_2.unwrap_or(r.new_b_1);
        let counted: Vec<f64> = results
            .iter()
            .filter_map(|r| r.complete_paths.map(|c| c as f64))
            .collect();
        SweepRow {
            value,
            instances: results.len(),
            accept_old_b: bounds.old_b.then(|| frac(&|r| r.old_b <= period)),
            accept_new_b_1: bounds.new_b_1.then(|| frac(&|r| r.new_b_1 <= period)),
            accept_new_b_2: bounds.new_b_2.then(|| frac(&|r| b2(r) <= period)),
            norm_new_b_1: bounds.new_b_1.then(|| mean(&|r| r.new_b_1.to_f64() / r.old_b.to_f64())),
            norm_new_b_2: bounds.new_b_2.then(|| mean(&|r| b2(r).to_f64() / r.old_b.to_f64())),
            time_old_b_ms: mean(&|r| r.old_b_secs * 1e3),
            time_new_b_1_ms: mean(&|r| r.new_b_1_secs * 1e3),
            time_new_b_2_ms: bounds.new_b_2.then(|| mean(&|r| r.new_b_2_secs * 1e3)),
            mean_tuples: bounds.new_b_2.then(|| mean(&|r| r.tuples_generated as f64)),
            mean_complete_paths: (!counted.is_empty()).then(|| counted.iter().sum::<f64>() / counted.len() as f64),
            new_b_2_failures: results.iter().filter(|r| r.new_b_2_failed).count(),
        }
    }
}

fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
}

/// Runs every (value, trial) instance and aggregates one row per value.
/// Bounds and acceptance are reproducible from the spec; timings are not.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.check()?;
    let jobs: Vec<(usize, usize)> = (0..spec.values.len())
        .flat_map(|p| (0..spec.trials).map(move |t| (p, t)))
        .collect();
    let results: Vec<InstanceResult> = pool(spec.workers).install(|| {
        jobs.par_iter()
            .map(|&(p, t)| {
                let seed = spec.instance_seed(p, t);
                let config = spec.parameter.apply(&spec.base, spec.values[p]).with_seed(seed);
                let (dag, platform) = gen_task(&config);
                run_instance(&dag, &platform, seed, spec.bounds, spec.time_budget, spec.path_limit)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(results
        .chunks(spec.trials)
        .zip(&spec.values)
        .map(|(chunk, &value)| SweepRow::aggregate(value, spec.base.period, spec.bounds, chunk))
        .collect())
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.6}")).unwrap_or_default()
}

/// Header plus one line per row.
pub fn write_sweep_csv<W: Write>(parameter: SweptParameter, rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record([
        parameter.name(),
        "instances",
        "accept_old_b",
        "accept_new_b_1",
        "accept_new_b_2",
        "norm_old_b",
        "norm_new_b_1",
        "norm_new_b_2",
        "time_old_b_ms",
        "time_new_b_1_ms",
        "time_new_b_2_ms",
        "mean_tuples",
        "mean_complete_paths",
        "new_b_2_failures",
    ])
    .map_err(io)?;
    for r in rows {
        w.write_record([
            format!("{}", r.value),
            r.instances.to_string(),
            opt(r.accept_old_b),
            opt(r.accept_new_b_1),
            opt(r.accept_new_b_2),
            "1.000000".to_string(),
            opt(r.norm_new_b_1),
            opt(r.norm_new_b_2),
            format!("{:.6}", r.time_old_b_ms),
            format!("{:.6}", r.time_new_b_1_ms),
            opt(r.time_new_b_2_ms),
            opt(r.mean_tuples),
            opt(r.mean_complete_paths),
            r.new_b_2_failures.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateSpaceRow {
    pub vertices: usize,
    pub complete_paths: u128,
    /// Vertex count of the longest path, by number of vertices.
    pub max_path_vertices: usize,
    pub tuples_generated: u64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateSpaceReport {
    pub rows: Vec<StateSpaceRow>,
    /// Instances whose path count exceeded the limit.
    pub skipped: usize,
    pub min_ratio: f64,
    pub median_ratio: f64,
    pub max_ratio: f64,
}

fn max_path_vertices(dag: &TypedDag) -> usize {
    let mut depth = vec![0usize; dag.vertex_count()];
    for &v in dag.topo_order() {
        depth[v.0] = 1 + dag.predecessors(v).iter().map(|u| depth[u.0]).max().unwrap_or(0);
    }
    depth.into_iter().max().unwrap_or(0)
}

/// Tuples generated by the search against the number of complete paths.
/// Returns `Ok(None)` when the path count exceeds `path_limit`.
pub fn state_space_row(dag: &TypedDag, platform: &Platform, path_limit: u128) -> Result<Option<StateSpaceRow>> {
    let dag = dag.normalize()?;
    let Some(paths) = dag.count_complete_paths().filter(|&c| c <= path_limit) else {
        return Ok(None);
    };
    let task = PreparedTask::new(dag.clone())?;
    let (_, stats) = bounds::new_b_2(&task, platform)?;
    Ok(Some(StateSpaceRow {
        vertices: dag.vertex_count(),
        complete_paths: paths,
        max_path_vertices: max_path_vertices(&dag),
        tuples_generated: stats.tuples_generated,
        ratio: stats.tuples_generated as f64 / paths as f64,
    }))
}

/// Generates `instances` tasks from `config` (seeds `config.seed + i`).
pub fn state_space_report(config: &GenConfig, instances: usize, path_limit: u128) -> Result<StateSpaceReport> {
    let rows: Vec<Option<StateSpaceRow>> = (0..instances)
        .into_par_iter()
        .map(|i| {
            let (dag, platform) = gen_task(&config.clone().with_seed(config.seed.wrapping_add(i as u64)));
            state_space_row(&dag, &platform, path_limit)
        })
        .collect::<Result<_>>()?;
    let skipped = rows.iter().filter(|r| r.is_none()).count();
    let rows: Vec<StateSpaceRow> = rows.into_iter().flatten().collect();
    let mut ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    ratios.sort_by(f64::total_cmp);
    let pick = |q: f64| {
        if ratios.is_empty() {
            f64::NAN
        } else {
            ratios[((ratios.len() - 1) as f64 * q).round() as usize]
        }
    };
    Ok(StateSpaceReport {
        min_ratio: pick(0.0),
        median_ratio: pick(0.5),
        max_ratio: pick(1.0),
        rows,
        skipped,
    })
}
