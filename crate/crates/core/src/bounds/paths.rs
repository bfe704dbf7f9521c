use crate::bitset::BitSet;
use crate::error::Result;
use crate::graph::{CoreTypeId, Path, Platform};
use crate::weight::Weight;

use super::PreparedTask;

/// Union of `par(τ)` over the type-`s` vertices `τ` of `path`.
pub fn ivs(task: &PreparedTask, path: &Path, s: CoreTypeId) -> BitSet {
    let mut set = BitSet::new(task.dag().vertex_count());
    for &tau in path.vertices() {
        if task.dag().core_type(tau) == s {
            set.union_with(task.par(tau));
        }
    }
    set
}

/// `len(π) + Σ_s Σ_{v ∈ ivs(π, s)} c(v) / M_s`.
pub fn path_bound(task: &PreparedTask, platform: &Platform, path: &Path) -> Result<Weight> {
    let dag = task.dag();
    platform.check_covers(dag)?;
    let mut bound = dag.path_length(path)?;
    for s in platform.types() {
        let interference: Weight = ivs(task, path, s).iter().map(|v| dag.vertices()[v].wcet).sum();
        bound += interference.div_count(platform.cores(s).unwrap());
    }
    Ok(bound)
}

/// Maximum of [`path_bound`] over every complete path, by enumeration.
pub fn new_b_2_bruteforce(task: &PreparedTask, platform: &Platform, limit: usize) -> Result<Weight> {
    platform.check_covers(task.dag())?;
    let mut best = Weight::ZERO;
    for path in task.dag().enumerate_complete_paths(limit)? {
        best = best.max(path_bound(task, platform, &path)?);
    }
    Ok(best)
}
