//! Exact computation of the per-path interference bound by searching over
//! abstract path tuples instead of enumerating paths.
//!
//! A tuple `⟨v, Δ, ℛ⟩` stands for every source-to-`v` path prefix whose
//! most recent vertex of each type is recorded in `Δ` and whose
//! accumulated bound is `ℛ`. Two prefixes with the same `v` and `Δ` extend
//! identically, so only the larger `ℛ` matters; more generally a tuple can be
//! dropped once another tuple at the same vertex dominates it.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CoreTypeId, Platform, VertexId};
use crate::weight::Weight;

use super::PreparedTask;

/// Default cap on simultaneously retained tuples.
pub const DEFAULT_MAX_RETAINED: usize = 10_000_000;

const NO_VERTEX: u32 = u32::MAX;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AbstractTuple {
    vertex: VertexId,
    delta: Box<[u32]>,
    r: Weight,
}

impl AbstractTuple {
    pub fn vertex(&self) -> VertexId {
        self.vertex
    }

    /// The most recent vertex of type `s` on the represented prefixes.
    pub fn delta(&self, s: CoreTypeId) -> Option<VertexId> {
        match self.delta[s.0] {
            NO_VERTEX => None,
            v => Some(VertexId(v as usize)),
        }
    }

    pub fn r(&self) -> Weight {
        self.r
    }

    pub fn type_count(&self) -> usize {
        self.delta.len()
    }
}

impl std::fmt::Debug for AbstractTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let delta: Vec<Option<usize>> = self
            .delta
            .iter()
            .map(|&d| (d != NO_VERTEX).then_some(d as usize))
            .collect();
        write!(f, "⟨{}, {:?}, {}⟩", self.vertex, delta, self.r)
    }
}

/// The tuple for the single-vertex path at the source.
pub fn initial_tuple(task: &PreparedTask, platform: &Platform) -> Result<AbstractTuple> {
    let dag = task.dag();
    platform.check_covers(dag)?;
    let src = dag.source();
    let mut delta = vec![NO_VERTEX; platform.type_count()].into_boxed_slice();
    delta[dag.core_type(src).0] = src.0 as u32;
    Ok(AbstractTuple {
        vertex: src,
        delta,
        r: dag.wcet(src),
    })
}

/// `Σ_{w ∈ par(v) \ par(prev)} c(w) / M_{γ(v)}`, with `par(⊥) = ∅`.
fn interference(task: &PreparedTask, platform: &Platform, v: VertexId, prev: Option<VertexId>) -> Weight {
    let dag = task.dag();
    let par_v = task.par(v);
    let sum: Weight = match prev {
        None => par_v.iter().map(|w| dag.vertices()[w].wcet).sum(),
        Some(p) => par_v.iter_difference(task.par(p)).map(|w| dag.vertices()[w].wcet).sum(),
    };
    sum.div_count(platform.cores(dag.core_type(v)).unwrap())
}

/// Extends `t` along the edge `t.vertex → v`.
pub fn extend_tuple(task: &PreparedTask, platform: &Platform, t: &AbstractTuple, v: VertexId) -> Result<AbstractTuple> {
    let dag = task.dag();
    if v.0 >= dag.vertex_count() || !dag.has_edge(t.vertex, v) {
        return Err(Error::NotASuccessor { from: t.vertex, to: v });
    }
    platform.check_covers(dag)?;
    let s = dag.core_type(v);
    let charge = interference(task, platform, v, t.delta(s));
    Ok(step(t, v, s, dag.wcet(v) + charge))
}

fn step(t: &AbstractTuple, v: VertexId, s: CoreTypeId, increment: Weight) -> AbstractTuple {
    let mut delta = t.delta.clone();
    delta[s.0] = v.0 as u32;
    AbstractTuple {
        vertex: v,
        delta,
        r: t.r + increment,
    }
}

/// Whether `t1` dominates `t2`: `t1` has at least `t2`'s bound and, for
/// every type, `t1`'s recorded vertex is absent or its par set avoids the
/// descendants of `t2`'s recorded vertex.
pub fn dominates(task: &PreparedTask, t1: &AbstractTuple, t2: &AbstractTuple) -> Result<bool> {
    if t1.vertex != t2.vertex {
        return Err(Error::VertexMismatch(t1.vertex, t2.vertex));
    }
    Ok(deltas_dominate(task, t1, t2) && t1.r >= t2.r)
}

#[inline]
fn deltas_dominate(task: &PreparedTask, t1: &AbstractTuple, t2: &AbstractTuple) -> bool {
    t1.delta.iter().zip(t2.delta.iter()).all(|(&d1, &d2)| {
        d1 == NO_VERTEX
            || d1 == d2
            || (d2 != NO_VERTEX && task.par_clear_of_des(VertexId(d1 as usize), VertexId(d2 as usize)))
    })
}

/// How newly generated tuples are filtered against a vertex's bucket.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PruneMode {
    /// Drop dominated newcomers and evict retained tuples a newcomer dominates.
    #[default]
    Bidirectional,
    /// Only drop newcomers that some retained tuple dominates.
    StrictPaper,
    /// Keep every tuple; the search degenerates to path enumeration.
    Disabled,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub prune: PruneMode,
    pub max_retained: usize,
    pub deadline: Option<Instant>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            prune: PruneMode::Bidirectional,
            max_retained: DEFAULT_MAX_RETAINED,
            deadline: None,
        }
    }
}

/// Search counters. Exact values depend on expansion order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub tuples_generated: u64,
    pub tuples_pruned: u64,
    pub peak_retained: usize,
    pub final_tuples: usize,
}

/// [`new_b_2_with`] under default options.
pub fn new_b_2(task: &PreparedTask, platform: &Platform) -> Result<(Weight, SearchStats)> {
    new_b_2_with(task, platform, &SearchOptions::default())
}

/// Exact maximum of the per-path bound over all complete paths.
///
/// Vertices are expanded in topological order; a vertex's bucket is expanded
/// only once every predecessor bucket has been expanded and discarded.
pub fn new_b_2_with(
    task: &PreparedTask,
    platform: &Platform,
    options: &SearchOptions,
) -> Result<(Weight, SearchStats)> {
    let dag = task.dag();
    let n = dag.vertex_count();
    let sink = dag.sink();
    let mut charges = ChargeCache::new(n);
    let mut buckets: Vec<Vec<AbstractTuple>> = vec![Vec::new(); n];
    let mut stats = SearchStats::default();
    let mut live: usize = 1;

    let init = initial_tuple(task, platform)?;
    buckets[init.vertex.0].push(init);
    stats.peak_retained = 1;

    for &v in dag.topo_order() {
        if v == sink {
            continue;
        }
        let bucket = std::mem::take(&mut buckets[v.0]);
        for t in &bucket {
            for &w in dag.successors(v) {
                let s = dag.core_type(w);
                let charge = charges.get(task, platform, w, t.delta(s));
                let next = step(t, w, s, dag.wcet(w) + charge);
                stats.tuples_generated += 1;
                let target = &mut buckets[w.0];
                let before = target.len();
                insert(task, target, next, options.prune);
                stats.tuples_pruned += (before + 1 - target.len()) as u64;
                live = live + target.len() - before;
                stats.peak_retained = stats.peak_retained.max(live);
                if live > options.max_retained {
                    return Err(Error::ResourceLimit {
                        limit: options.max_retained,
                    });
                }
                if stats.tuples_generated % 1024 == 0 {
                    if let Some(deadline) = options.deadline {
                        if Instant::now() >= deadline {
                            return Err(Error::Timeout);
                        }
                    }
                }
            }
            live -= 1;
        }
    }

    let finals = &buckets[sink.0];
    stats.final_tuples = finals.len();
    let best = finals
        .iter()
        .map(|t| t.r)
        .max()
        .expect("sink is reachable from the source");
    Ok((best, stats))
}

fn insert(task: &PreparedTask, bucket: &mut Vec<AbstractTuple>, next: AbstractTuple, mode: PruneMode) {
    match mode {
        PruneMode::Disabled => {}
        PruneMode::StrictPaper => {
            if bucket.iter().any(|t| dominated_by(task, &next, t)) {
                return;
            }
            // Only one bound is kept per (vertex, Δ).
            if let Some(same) = bucket.iter_mut().find(|t| t.delta == next.delta) {
                *same = next;
                return;
            }
        }
        PruneMode::Bidirectional => {
            if bucket.iter().any(|t| dominated_by(task, &next, t)) {
                return;
            }
            bucket.retain(|t| !dominated_by(task, t, &next));
        }
    }
    bucket.push(next);
}

#[inline]
fn dominated_by(task: &PreparedTask, t: &AbstractTuple, by: &AbstractTuple) -> bool {
    deltas_dominate(task, by, t) && by.r >= t.r
}

/// Memoized interference charges, keyed by (vertex, previous same-type vertex).
struct ChargeCache {
    n: usize,
    cells: Vec<Option<Weight>>,
}

impl ChargeCache {
    fn new(n: usize) -> Self {
        ChargeCache {
            n,
            cells: vec![None; n * (n + 1)],
        }
    }

    fn get(&mut self, task: &PreparedTask, platform: &Platform, v: VertexId, prev: Option<VertexId>) -> Weight {
        let idx = v.0 * (self.n + 1) + prev.map_or(self.n, |p| p.0);
        *self.cells[idx].get_or_insert_with(|| interference(task, platform, v, prev))
    }
}
