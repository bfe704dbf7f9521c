//! Worst-case response-time bounds.
//!
//! * [`old_b`]: the classic typed list-scheduling bound, driven by the
//!   longest path and the largest core count.
//! * [`new_b_1`]: the scaled-graph bound, which charges each vertex of
//!   the critical path only `1 - 1/M_s` of its WCET.
//! * [`new_b_2`]: the per-path interference bound, maximised over all
//!   complete paths. Computed exactly by a tuple search with dominance
//!   pruning; [`new_b_2_bruteforce`] enumerates paths instead and serves as
//!   its oracle.

mod paths;
mod search;

pub use paths::{ivs, new_b_2_bruteforce, path_bound};
pub use search::{
    dominates, extend_tuple, initial_tuple, new_b_2, new_b_2_with, AbstractTuple, PruneMode, SearchOptions,
    SearchStats, DEFAULT_MAX_RETAINED,
};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::graph::{ParSets, Reachability, TypedDag, VertexId};
use crate::graph::{Platform, Vertex};
use crate::weight::Weight;

/// A normalized task together with its reachability closure and par sets,
/// built once and shared by every path-based computation.
#[derive(Clone, Debug)]
pub struct PreparedTask {
    dag: TypedDag,
    reach: Reachability,
    par: ParSets,
    /// Row `x` holds `y` iff `par(x) ∩ des(y) = ∅`.
    par_clear_of_des: Vec<BitSet>,
}

impl PreparedTask {
    pub fn new(dag: TypedDag) -> Result<Self> {
        if dag.vertex_count() == 0 {
            return Err(Error::EmptyGraph);
        }
        if !dag.is_normalized() {
            return Err(Error::NotNormalized);
        }
        let reach = Reachability::new(&dag);
        let par = ParSets::new(&dag, &reach);
        let n = dag.vertex_count();
        let par_clear_of_des = dag
            .ids()
            .map(|x| {
                let mut row = BitSet::new(n);
                for y in dag.ids() {
                    if par.get(x).is_disjoint(reach.descendants(y)) {
                        row.insert(y.0);
                    }
                }
                row
            })
            .collect();
        Ok(PreparedTask {
            dag,
            reach,
            par,
            par_clear_of_des,
        })
    }

    /// Normalizes `dag` first if needed.
    pub fn from_any(dag: &TypedDag) -> Result<Self> {
        PreparedTask::new(dag.normalize()?)
    }

    pub fn dag(&self) -> &TypedDag {
        &self.dag
    }

    pub fn reach(&self) -> &Reachability {
        &self.reach
    }

    pub fn par(&self, v: VertexId) -> &BitSet {
        self.par.get(v)
    }

    #[inline]
    pub(crate) fn par_clear_of_des(&self, x: VertexId, y: VertexId) -> bool {
        self.par_clear_of_des[x.0].contains(y.0)
    }
}

/// `Σ_s vol_s(G) / M_s` over the platform's types.
fn workload_term(dag: &TypedDag, platform: &Platform) -> Weight {
    platform
        .types()
        .map(|s| dag.vol_of_type(s).div_count(platform.cores(s).unwrap()))
        .sum()
}

/// `(1 - 1/max_s M_s)·len(G) + Σ_s vol_s(G)/M_s`.
pub fn old_b(dag: &TypedDag, platform: &Platform) -> Result<Weight> {
    platform.check_covers(dag)?;
    let max_m = Weight::from(i64::from(platform.max_cores()));
    let factor = Weight::ONE - Weight::ONE / max_m;
    Ok(factor * dag.longest_path() + workload_term(dag, platform))
}

/// Same topology and types, each WCET multiplied by `1 - 1/M_{γ(v)}`.
pub fn scaled_graph(dag: &TypedDag, platform: &Platform) -> Result<TypedDag> {
    platform.check_covers(dag)?;
    let vertices = dag
        .vertices()
        .iter()
        .map(|v| Vertex {
            wcet: scaled_wcet(v, platform),
            ..v.clone()
        })
        .collect();
    let edges: Vec<(usize, usize)> = dag.edges().map(|(u, v)| (u.0, v.0)).collect();
    TypedDag::new(vertices, &edges)
}

fn scaled_wcet(v: &Vertex, platform: &Platform) -> Weight {
    let m = platform.cores(v.core_type).unwrap();
    v.wcet - v.wcet.div_count(m)
}

/// `len(Ĝ) + Σ_s vol_s(G)/M_s` where `Ĝ` is the scaled graph.
pub fn new_b_1(dag: &TypedDag, platform: &Platform) -> Result<Weight> {
    platform.check_covers(dag)?;
    let scaled_len = dag.longest_path_by(|v| scaled_wcet(dag.vertex(v), platform));
    Ok(scaled_len + workload_term(dag, platform))
}
