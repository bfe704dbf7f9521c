use std::time::Instant;

use serde::{Serialize, Serializer};

use crate::bounds::{self, PreparedTask, SearchOptions};
use crate::error::Result;
use crate::graph::{Platform, TypedDag};
use crate::weight::{fraction, Weight};

#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    pub new_b_2: bool,
    pub search: SearchOptions,
    pub count_paths: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            new_b_2: true,
            search: SearchOptions::default(),
            count_paths: true,
        }
    }
}

/// All bounds for one task on one platform.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    #[serde(with = "fraction")]
    pub old_b: Weight,
    #[serde(with = "fraction")]
    pub new_b_1: Weight,
    #[serde(with = "fraction::option", skip_serializing_if = "Option::is_none")]
    pub new_b_2: Option<Weight>,
    pub tuples_generated: u64,
    pub tuples_pruned: u64,
    pub tuples_retained_peak: usize,
    #[serde(serialize_with = "path_count")]
    pub complete_path_count: Option<u128>,
    pub old_b_ns: u64,
    pub new_b_1_ns: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub new_b_2_ns: Option<u64>,
}

fn path_count<S: Serializer>(count: &Option<u128>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match count {
        Some(c) => s.serialize_u128(*c),
        None => s.serialize_str("not counted"),
    }
}

impl BoundReport {
    /// The smallest bound that was computed.
    pub fn tightest(&self) -> Weight {
        self.new_b_2.unwrap_or(self.new_b_1).min(self.new_b_1).min(self.old_b)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn elapsed_ns(start: Instant) -> u64 {
    start.elapsed().as_nanos().try_into().unwrap_or(u64::MAX)
}

/// Computes OLD-B and NEW-B-1, and NEW-B-2 unless disabled. The graph is
/// normalized first if it has several sources or sinks.
pub fn analyze(dag: &TypedDag, platform: &Platform, options: &AnalyzeOptions) -> Result<BoundReport> {
    let dag = dag.normalize()?;
    platform.check_covers(&dag)?;

    let t = Instant::now();
    let old_b = bounds::old_b(&dag, platform)?;
    let old_b_ns = elapsed_ns(t);

    let t = Instant::now();
    let new_b_1 = bounds::new_b_1(&dag, platform)?;
    let new_b_1_ns = elapsed_ns(t);

    let complete_path_count = if options.count_paths {
        dag.count_complete_paths()
    } else {
        None
    };

    let mut report = BoundReport {
        old_b,
        new_b_1,
        new_b_2: None,
        tuples_generated: 0,
        tuples_pruned: 0,
        tuples_retained_peak: 0,
        complete_path_count,
        old_b_ns,
        new_b_1_ns,
        new_b_2_ns: None,
    };
    if options.new_b_2 {
        let t = Instant::now();
        let task = PreparedTask::new(dag)?;
        let (value, stats) = bounds::new_b_2_with(&task, platform, &options.search)?;
        report.new_b_2_ns = Some(elapsed_ns(t));
        report.new_b_2 = Some(value);
        report.tuples_generated = stats.tuples_generated;
        report.tuples_pruned = stats.tuples_pruned;
        report.tuples_retained_peak = stats.peak_retained;
    }
    Ok(report)
}
