//! Non-preemptive, work-conserving list scheduling of a typed DAG.
//!
//! Time advances from event to event. At each instant every job finishing
//! then releases its core first; afterwards eligible vertices are placed on
//! free cores of their type in priority order. Zero-length jobs finish on the
//! spot and may make further vertices eligible at the same instant.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CoreTypeId, Path, Platform, TypedDag, VertexId};
use crate::weight::Weight;

/// Steps of the grid `c(v)·k/SCENARIO_STEPS` from which actual times are drawn.
pub const SCENARIO_STEPS: i64 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "seed")]
pub enum TieBreak {
    /// Lower vertex index first.
    VertexIndex,
    /// A random fixed priority order drawn from the seed.
    Random(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExecutionScenario {
    pub actual_time: Vec<Weight>,
    pub tie_break: TieBreak,
}

impl ExecutionScenario {
    /// Every vertex runs for its WCET.
    pub fn full_wcet(dag: &TypedDag) -> Self {
        ExecutionScenario {
            actual_time: dag.vertices().iter().map(|v| v.wcet).collect(),
            tie_break: TieBreak::VertexIndex,
        }
    }

    /// Actual times uniform on `{c(v)·k/64 : k = 1..=64}`, random priorities.
    pub fn random(dag: &TypedDag, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let actual_time = dag
            .vertices()
            .iter()
            .map(|v| v.wcet * Weight::new(rng.gen_range(1..=SCENARIO_STEPS), SCENARIO_STEPS))
            .collect();
        ExecutionScenario {
            actual_time,
            tie_break: TieBreak::Random(rng.gen()),
        }
    }

    pub fn validate(&self, dag: &TypedDag) -> Result<()> {
        if self.actual_time.len() != dag.vertex_count() {
            return Err(Error::InvalidScenario(format!(
                "{} actual times for {} vertices",
                self.actual_time.len(),
                dag.vertex_count()
            )));
        }
        for (v, vertex) in dag.iter() {
            let a = self.actual_time[v.0];
            let ok = if vertex.wcet.is_zero() {
                a.is_zero()
            } else {
                a > Weight::ZERO && a <= vertex.wcet
            };
            if !ok {
                return Err(Error::InvalidScenario(format!(
                    "actual time {a} of {v} outside (0, {}]",
                    vertex.wcet
                )));
            }
        }
        Ok(())
    }

    /// Priority rank per vertex, lower runs first.
    fn ranks(&self, n: usize) -> Vec<usize> {
        match self.tie_break {
            TieBreak::VertexIndex => (0..n).collect(),
            TieBreak::Random(seed) => {
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
                let mut rank = vec![0; n];
                for (r, v) in order.into_iter().enumerate() {
                    rank[v] = r;
                }
                rank
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreRef {
    pub core_type: CoreTypeId,
    pub index: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Job {
    pub vertex: VertexId,
    #[serde(with = "crate::weight::fraction")]
    pub start: Weight,
    #[serde(with = "crate::weight::fraction")]
    pub finish: Weight,
    pub core: CoreRef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecutionSequence {
    /// Indexed by vertex id.
    pub jobs: Vec<Job>,
    #[serde(with = "crate::weight::fraction")]
    pub response_time: Weight,
}

impl ExecutionSequence {
    pub fn finish(&self, v: VertexId) -> Weight {
        self.jobs[v.0].finish
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sequence serializes")
    }

    /// One line per execution interval, sorted by start time.
    pub fn to_csv(&self) -> String {
        let mut jobs = self.jobs.clone();
        jobs.sort_by(|a, b| a.start.cmp(&b.start).then(a.vertex.cmp(&b.vertex)));
        let mut out = String::from("vertex,core_type,core_index,start,finish,start_exact,finish_exact\n");
        for j in jobs {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                j.vertex.0,
                j.core.core_type.0,
                j.core.index,
                j.start.to_decimal_string(6),
                j.finish.to_decimal_string(6),
                j.start.to_fraction_string(),
                j.finish.to_fraction_string()
            );
        }
        out
    }
}

/// Runs the list scheduler. The platform must cover every vertex type.
pub fn simulate(dag: &TypedDag, platform: &Platform, scenario: &ExecutionScenario) -> Result<ExecutionSequence> {
    platform.check_covers(dag)?;
    scenario.validate(dag)?;
    let n = dag.vertex_count();
    let rank = scenario.ranks(n);

    let mut free: Vec<BTreeSet<u32>> = platform.core_counts().iter().map(|&m| (0..m).collect()).collect();
    let mut missing: Vec<usize> = dag.ids().map(|v| dag.predecessors(v).len()).collect();
    // eligible vertices keyed by (rank, id)
    let mut eligible: BTreeSet<(usize, usize)> = dag
        .ids()
        .filter(|v| missing[v.0] == 0)
        .map(|v| (rank[v.0], v.0))
        .collect();
    // running jobs keyed by (finish, id)
    let mut running: BTreeSet<(Weight, usize)> = BTreeSet::new();
    let mut jobs: Vec<Option<Job>> = vec![None; n];
    let mut now = Weight::ZERO;
    let mut done = 0;

    while done < n {
        // finish everything due by now
        while let Some(&(finish, v)) = running.first() {
            if finish > now {
                break;
            }
            running.pop_first();
            done += 1;
            let job = jobs[v].as_ref().unwrap();
            free[job.core.core_type.0].insert(job.core.index);
            for &w in dag.successors(VertexId(v)) {
                missing[w.0] -= 1;
                if missing[w.0] == 0 {
                    eligible.insert((rank[w.0], w.0));
                }
            }
        }
        // dispatch in priority order
        let mut started_zero = false;
        let candidates: Vec<(usize, usize)> = eligible.iter().copied().collect();
        for (r, v) in candidates {
            let s = dag.core_type(VertexId(v));
            let Some(core) = free[s.0].pop_first() else {
                continue;
            };
            eligible.remove(&(r, v));
            let finish = now + scenario.actual_time[v];
            jobs[v] = Some(Job {
                vertex: VertexId(v),
                start: now,
                finish,
                core: CoreRef {
                    core_type: s,
                    index: core,
                },
            });
            running.insert((finish, v));
            started_zero |= finish == now;
        }
        if started_zero {
            continue;
        }
        match running.first() {
            Some(&(finish, _)) => now = finish,
            None => {
                debug_assert!(done == n, "scheduler stalled with unfinished vertices");
                break;
            }
        }
    }

    let jobs: Vec<Job> = jobs
        .into_iter()
        .map(|j| j.expect("every vertex is scheduled"))
        .collect();
    let response_time = jobs.iter().map(|j| j.finish).max().unwrap_or(Weight::ZERO);
    Ok(ExecutionSequence { jobs, response_time })
}

/// Walks back from the sink, always to the predecessor that finished last
/// (lowest index among ties).
pub fn critical_path_of(dag: &TypedDag, sequence: &ExecutionSequence) -> Path {
    let mut v = dag.sink();
    let mut rev = vec![v];
    while let Some(&u) = dag
        .predecessors(v)
        .iter()
        .max_by(|a, b| sequence.finish(**a).cmp(&sequence.finish(**b)).then(b.cmp(a)))
    {
        rev.push(u);
        v = u;
    }
    rev.reverse();
    Path(rev)
}

/// Checks the critical-path condition at every step of `path`.
pub fn is_critical_path(dag: &TypedDag, sequence: &ExecutionSequence, path: &Path) -> bool {
    dag.is_complete_path(path)
        && path.vertices().windows(2).all(|pair| {
            let latest = dag
                .predecessors(pair[1])
                .iter()
                .map(|&u| sequence.finish(u))
                .max()
                .unwrap();
            sequence.finish(pair[0]) == latest
        })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The trace does not describe one job per vertex on a valid core.
    Malformed(String),
    StartsBeforePredecessor {
        vertex: VertexId,
        predecessor: VertexId,
    },
    CoreOverlap {
        first: VertexId,
        second: VertexId,
        core: CoreRef,
    },
    /// `vertex` was eligible at `time` while a core of its type sat idle.
    IdleCore {
        time: Weight,
        vertex: VertexId,
        core_type: CoreTypeId,
    },
}

/// Validates an execution trace: structure, precedence, exclusive cores, and
/// the work-conserving rule.
///
/// It suffices to test the rule at time 0 and at finish times: between two
/// consecutive finishes no vertex becomes eligible and no core is released.
pub fn check_work_conserving(
    dag: &TypedDag,
    platform: &Platform,
    sequence: &ExecutionSequence,
) -> std::result::Result<(), Violation> {
    let n = dag.vertex_count();
    if sequence.jobs.len() != n {
        return Err(Violation::Malformed(format!(
            "{} jobs for {n} vertices",
            sequence.jobs.len()
        )));
    }
    for (i, job) in sequence.jobs.iter().enumerate() {
        let v = VertexId(i);
        if job.vertex != v {
            return Err(Violation::Malformed(format!("job {i} is labelled {}", job.vertex)));
        }
        if job.core.core_type != dag.core_type(v) {
            return Err(Violation::Malformed(format!("{v} runs on a core of the wrong type")));
        }
        if platform.cores(job.core.core_type).is_none_or(|m| job.core.index >= m) {
            return Err(Violation::Malformed(format!("{v} runs on a nonexistent core")));
        }
        if job.start < Weight::ZERO || job.finish < job.start {
            return Err(Violation::Malformed(format!("{v} has an invalid interval")));
        }
        for &u in dag.predecessors(v) {
            if job.start < sequence.jobs[u.0].finish {
                return Err(Violation::StartsBeforePredecessor {
                    vertex: v,
                    predecessor: u,
                });
            }
        }
    }
    let mut by_core: Vec<&Job> = sequence.jobs.iter().filter(|j| j.finish > j.start).collect();
    by_core.sort_by_key(|j| (j.core.core_type, j.core.index, j.start));
    for pair in by_core.windows(2) {
        if pair[0].core == pair[1].core && pair[1].start < pair[0].finish {
            return Err(Violation::CoreOverlap {
                first: pair[0].vertex,
                second: pair[1].vertex,
                core: pair[0].core,
            });
        }
    }

    let ready = |v: VertexId| {
        dag.predecessors(v)
            .iter()
            .map(|u| sequence.jobs[u.0].finish)
            .max()
            .unwrap_or(Weight::ZERO)
    };
    let mut instants: Vec<Weight> = sequence.jobs.iter().map(|j| j.finish).collect();
    instants.push(Weight::ZERO);
    instants.sort();
    instants.dedup();
    for t in instants {
        for v in dag.ids() {
            let job = &sequence.jobs[v.0];
            if ready(v) <= t && t < job.start {
                let s = dag.core_type(v);
                let busy = sequence
                    .jobs
                    .iter()
                    .filter(|j| j.core.core_type == s && j.start <= t && t < j.finish)
                    .count();
                if (busy as u32) < platform.cores(s).unwrap() {
                    return Err(Violation::IdleCore {
                        time: t,
                        vertex: v,
                        core_type: s,
                    });
                }
            }
        }
    }
    Ok(())
}
