//! The typed DAG task model and the structural quantities derived from it.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::weight::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoreTypeId(pub usize);

impl CoreTypeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for CoreTypeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub wcet: Weight,
    pub core_type: CoreTypeId,
    /// Added by [`TypedDag::normalize`]; always has zero WCET.
    pub dummy: bool,
}

impl Vertex {
    pub fn new(wcet: Weight, core_type: CoreTypeId) -> Self {
        Vertex {
            wcet,
            core_type,
            dummy: false,
        }
    }
}

/// The core types of a platform and how many cores of each type exist.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Platform {
    core_counts: Vec<u32>,
}

impl Platform {
    pub fn new(core_counts: Vec<u32>) -> Result<Self> {
        if core_counts.is_empty() {
            return Err(Error::InvalidPlatform("no core types".into()));
        }
        if let Some(s) = core_counts.iter().position(|&m| m == 0) {
            return Err(Error::InvalidPlatform(format!("type {s} has zero cores")));
        }
        Ok(Platform { core_counts })
    }

    pub fn type_count(&self) -> usize {
        self.core_counts.len()
    }

    pub fn cores(&self, s: CoreTypeId) -> Option<u32> {
        self.core_counts.get(s.0).copied()
    }

    pub fn core_counts(&self) -> &[u32] {
        &self.core_counts
    }

    pub fn max_cores(&self) -> u32 {
        self.core_counts.iter().copied().max().unwrap_or(1)
    }

    pub fn types(&self) -> impl Iterator<Item = CoreTypeId> {
        (0..self.core_counts.len()).map(CoreTypeId)
    }

    /// Copy of this platform with `M_s` replaced.
    pub fn with_cores(&self, s: CoreTypeId, count: u32) -> Result<Platform> {
        let mut counts = self.core_counts.clone();
        *counts
            .get_mut(s.0)
            .ok_or_else(|| Error::InvalidPlatform(format!("no core type {s}")))? = count;
        Platform::new(counts)
    }

    /// Errors with `UnknownType` for the first vertex whose type is missing.
    pub fn check_covers(&self, dag: &TypedDag) -> Result<()> {
        for (v, vertex) in dag.iter() {
            if vertex.core_type.0 >= self.core_counts.len() {
                return Err(Error::UnknownType {
                    vertex: v,
                    core_type: vertex.core_type,
                });
            }
        }
        Ok(())
    }
}

impl TryFrom<Vec<u32>> for Platform {
    type Error = Error;
    fn try_from(counts: Vec<u32>) -> Result<Self> {
        Platform::new(counts)
    }
}

impl From<Platform> for Vec<u32> {
    fn from(p: Platform) -> Self {
        p.core_counts
    }
}

/// A validated vertex-weighted, vertex-typed DAG.
///
/// Vertex ids are dense indices. Adjacency lists are sorted and free of
/// duplicates; `topo_order` breaks ties by lowest index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypedDag {
    vertices: Vec<Vertex>,
    succ: Vec<Vec<VertexId>>,
    pred: Vec<Vec<VertexId>>,
    topo: Vec<VertexId>,
}

/// A vertex sequence in which consecutive vertices are joined by edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(pub Vec<VertexId>);

impl Path {
    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Checks that every edge endpoint exists and the edge relation is acyclic.
pub fn validate(vertex_count: usize, edges: &[(usize, usize)]) -> Result<()> {
    let mut succ = vec![Vec::new(); vertex_count];
    for &(u, v) in edges {
        if u >= vertex_count || v >= vertex_count {
            return Err(Error::DanglingEdge { from: u, to: v });
        }
        succ[u].push(v);
    }
    match find_cycle(&succ) {
        Some(cycle) => Err(Error::CycleDetected {
            cycle: cycle.into_iter().map(VertexId).collect(),
        }),
        None => Ok(()),
    }
}

fn find_cycle(succ: &[Vec<usize>]) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let n = succ.len();
    let mut mark = vec![Mark::New; n];
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if mark[root] != Mark::New {
            continue;
        }
        mark[root] = Mark::Active;
        stack.push((root, 0));
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            if let Some(&w) = succ[u].get(*next) {
                *next += 1;
                match mark[w] {
                    Mark::New => {
                        mark[w] = Mark::Active;
                        stack.push((w, 0));
                    }
                    Mark::Active => {
                        let start = stack.iter().position(|&(x, _)| x == w).unwrap();
                        let mut cycle: Vec<usize> = stack[start..].iter().map(|&(x, _)| x).collect();
                        cycle.push(w);
                        return Some(cycle);
                    }
                    Mark::Done => {}
                }
            } else {
                mark[u] = Mark::Done;
                stack.pop();
            }
        }
    }
    None
}

impl TypedDag {
    /// Validates and builds a graph. Parallel duplicate edges are merged.
    pub fn new(vertices: Vec<Vertex>, edges: &[(usize, usize)]) -> Result<Self> {
        validate(vertices.len(), edges)?;
        let n = vertices.len();
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for &(u, v) in edges {
            succ[u].push(VertexId(v));
            pred[v].push(VertexId(u));
        }
        for list in succ.iter_mut().chain(pred.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        let topo = topological_order(&succ, &pred);
        Ok(TypedDag {
            vertices,
            succ,
            pred,
            topo,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v.0]
    }

    pub fn wcet(&self, v: VertexId) -> Weight {
        self.vertices[v.0].wcet
    }

    pub fn core_type(&self, v: VertexId) -> CoreTypeId {
        self.vertices[v.0].core_type
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &Vertex)> {
        self.vertices.iter().enumerate().map(|(i, v)| (VertexId(i), v))
    }

    pub fn ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn successors(&self, v: VertexId) -> &[VertexId] {
        &self.succ[v.0]
    }

    pub fn predecessors(&self, v: VertexId) -> &[VertexId] {
        &self.pred[v.0]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.succ[u.0].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&v| (VertexId(u), v)))
    }

    pub fn topo_order(&self) -> &[VertexId] {
        &self.topo
    }

    pub fn sources(&self) -> Vec<VertexId> {
        self.ids().filter(|v| self.pred[v.0].is_empty()).collect()
    }

    pub fn sinks(&self) -> Vec<VertexId> {
        self.ids().filter(|v| self.succ[v.0].is_empty()).collect()
    }

    pub fn is_normalized(&self) -> bool {
        !self.vertices.is_empty() && self.sources().len() == 1 && self.sinks().len() == 1
    }

    /// The unique source. Panics unless the graph is normalized.
    pub fn source(&self) -> VertexId {
        let sources = self.sources();
        assert_eq!(sources.len(), 1, "graph is not normalized");
        sources[0]
    }

    /// The unique sink. Panics unless the graph is normalized.
    pub fn sink(&self) -> VertexId {
        let sinks = self.sinks();
        assert_eq!(sinks.len(), 1, "graph is not normalized");
        sinks[0]
    }

    /// Adds a zero-WCET dummy source (sink) of type 0 when there is more
    /// than one source (sink). Already-normalized graphs come back unchanged.
    pub fn normalize(&self) -> Result<TypedDag> {
        if self.vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let sources = self.sources();
        let sinks = self.sinks();
        if sources.len() == 1 && sinks.len() == 1 {
            return Ok(self.clone());
        }
        let mut vertices = self.vertices.clone();
        let mut edges: Vec<(usize, usize)> = self.edges().map(|(u, v)| (u.0, v.0)).collect();
        let dummy = Vertex {
            wcet: Weight::ZERO,
            core_type: CoreTypeId(0),
            dummy: true,
        };
        if sources.len() > 1 {
            let src = vertices.len();
            vertices.push(dummy.clone());
            edges.extend(sources.iter().map(|s| (src, s.0)));
        }
        if sinks.len() > 1 {
            let snk = vertices.len();
            vertices.push(dummy);
            edges.extend(sinks.iter().map(|s| (s.0, snk)));
        }
        TypedDag::new(vertices, &edges)
    }

    pub fn vol(&self) -> Weight {
        self.vertices.iter().map(|v| v.wcet).sum()
    }

    pub fn vol_of_type(&self, s: CoreTypeId) -> Weight {
        self.vertices.iter().filter(|v| v.core_type == s).map(|v| v.wcet).sum()
    }

    /// Length of the longest path, by dynamic programming in topological order.
    pub fn longest_path(&self) -> Weight {
        self.longest_path_by(|v| self.wcet(v))
    }

    /// Longest path under an alternative vertex weighting.
    pub fn longest_path_by(&self, weight: impl Fn(VertexId) -> Weight) -> Weight {
        let mut best = vec![Weight::ZERO; self.vertices.len()];
        let mut overall = Weight::ZERO;
        for &v in &self.topo {
            let before = self.pred[v.0].iter().map(|u| best[u.0]).max().unwrap_or(Weight::ZERO);
            best[v.0] = before + weight(v);
            overall = overall.max(best[v.0]);
        }
        overall
    }

    pub fn path_length(&self, path: &Path) -> Result<Weight> {
        self.check_path(path)?;
        Ok(path.0.iter().map(|&v| self.wcet(v)).sum())
    }

    pub fn check_path(&self, path: &Path) -> Result<()> {
        if let Some(&v) = path.0.iter().find(|v| v.0 >= self.vertices.len()) {
            return Err(Error::NotAPath { from: v, to: v });
        }
        for pair in path.0.windows(2) {
            if !self.has_edge(pair[0], pair[1]) {
                return Err(Error::NotAPath {
                    from: pair[0],
                    to: pair[1],
                });
            }
        }
        Ok(())
    }

    /// True if `path` runs from a source to a sink.
    pub fn is_complete_path(&self, path: &Path) -> bool {
        match (path.0.first(), path.0.last()) {
            (Some(&first), Some(&last)) => {
                self.pred[first.0].is_empty() && self.succ[last.0].is_empty() && self.check_path(path).is_ok()
            }
            _ => false,
        }
    }

    /// Every source-to-sink path, depth first. Fails once more than `limit`
    /// paths have been produced.
    pub fn enumerate_complete_paths(&self, limit: usize) -> Result<Vec<Path>> {
        let mut paths = Vec::new();
        let mut current = Vec::new();
        for src in self.sources() {
            current.push(src);
            self.extend_paths(&mut current, &mut paths, limit)?;
            current.pop();
        }
        Ok(paths)
    }

    fn extend_paths(&self, current: &mut Vec<VertexId>, out: &mut Vec<Path>, limit: usize) -> Result<()> {
        let last = *current.last().unwrap();
        if self.succ[last.0].is_empty() {
            if out.len() == limit {
                return Err(Error::PathExplosion { limit });
            }
            out.push(Path(current.clone()));
            return Ok(());
        }
        for &w in &self.succ[last.0] {
            current.push(w);
            self.extend_paths(current, out, limit)?;
            current.pop();
        }
        Ok(())
    }

    /// Number of complete paths, or `None` if it does not fit in a `u128`.
    pub fn count_complete_paths(&self) -> Option<u128> {
        let mut count = vec![0u128; self.vertices.len()];
        let mut total: u128 = 0;
        for &v in &self.topo {
            let c = if self.pred[v.0].is_empty() {
                1
            } else {
                self.pred[v.0]
                    .iter()
                    .try_fold(0u128, |acc, u| acc.checked_add(count[u.0]))?
            };
            count[v.0] = c;
            if self.succ[v.0].is_empty() {
                total = total.checked_add(c)?;
            }
        }
        Some(total)
    }
}

fn topological_order(succ: &[Vec<VertexId>], pred: &[Vec<VertexId>]) -> Vec<VertexId> {
    let mut indegree: Vec<usize> = pred.iter().map(Vec::len).collect();
    let mut ready: BinaryHeap<Reverse<usize>> = indegree
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == 0)
        .map(|(i, _)| Reverse(i))
        .collect();
    let mut order = Vec::with_capacity(succ.len());
    while let Some(Reverse(u)) = ready.pop() {
        order.push(VertexId(u));
        for w in &succ[u] {
            indegree[w.0] -= 1;
            if indegree[w.0] == 0 {
                ready.push(Reverse(w.0));
            }
        }
    }
    debug_assert_eq!(order.len(), succ.len());
    order
}

/// Transitive closure of the edge relation, one bit row per vertex.
#[derive(Clone, Debug)]
pub struct Reachability {
    descendants: Vec<BitSet>,
    ancestors: Vec<BitSet>,
}

impl Reachability {
    pub fn new(dag: &TypedDag) -> Self {
        let n = dag.vertex_count();
        let mut descendants = vec![BitSet::new(n); n];
        for &v in dag.topo_order().iter().rev() {
            let mut row = BitSet::new(n);
            for &w in dag.successors(v) {
                row.insert(w.0);
                row.union_with(&descendants[w.0]);
            }
            descendants[v.0] = row;
        }
        let mut ancestors = vec![BitSet::new(n); n];
        for (u, row) in descendants.iter().enumerate() {
            for v in row.iter() {
                ancestors[v].insert(u);
            }
        }
        Reachability { descendants, ancestors }
    }

    pub fn descendants(&self, v: VertexId) -> &BitSet {
        &self.descendants[v.0]
    }

    pub fn ancestors(&self, v: VertexId) -> &BitSet {
        &self.ancestors[v.0]
    }

    /// True if there is a non-empty path from `u` to `v`.
    pub fn reaches(&self, u: VertexId, v: VertexId) -> bool {
        self.descendants[u.0].contains(v.0)
    }

    /// True if `u` and `v` are distinct and neither reaches the other.
    pub fn unordered(&self, u: VertexId, v: VertexId) -> bool {
        u != v && !self.reaches(u, v) && !self.reaches(v, u)
    }
}

/// `par(v)` for every vertex: same-type vertices that are neither
/// ancestors nor descendants of `v` (and not `v` itself).
#[derive(Clone, Debug)]
pub struct ParSets {
    sets: Vec<BitSet>,
}

impl ParSets {
    pub fn new(dag: &TypedDag, reach: &Reachability) -> Self {
        let n = dag.vertex_count();
        let mut by_type: Vec<BitSet> = Vec::new();
        for (v, vertex) in dag.iter() {
            let s = vertex.core_type.0;
            if by_type.len() <= s {
                by_type.resize(s + 1, BitSet::new(n));
            }
            by_type[s].insert(v.0);
        }
        let sets = dag
            .iter()
            .map(|(v, vertex)| {
                let mut set = by_type[vertex.core_type.0].clone();
                set.remove(v.0);
                set.difference_with(reach.ancestors(v));
                set.difference_with(reach.descendants(v));
                set
            })
            .collect();
        ParSets { sets }
    }

    pub fn get(&self, v: VertexId) -> &BitSet {
        &self.sets[v.0]
    }
}

/// `par(v)` as a sorted vertex list.
pub fn par_set(dag: &TypedDag, reach: &Reachability, v: VertexId) -> Vec<VertexId> {
    let s = dag.core_type(v);
    dag.ids()
        .filter(|&u| dag.core_type(u) == s && reach.unordered(u, v))
        .collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn v(wcet: i64, s: usize) -> Vertex {
        Vertex::new(Weight::from(wcet), CoreTypeId(s))
    }

    pub fn chain(weights: &[i64]) -> TypedDag {
        let vertices = weights.iter().map(|&w| v(w, 0)).collect();
        let edges: Vec<_> = (1..weights.len()).map(|i| (i - 1, i)).collect();
        TypedDag::new(vertices, &edges).unwrap()
    }

    #[test]
    fn single_vertex_is_valid() {
        let dag = TypedDag::new(vec![v(7, 0)], &[]).unwrap();
        assert!(dag.is_normalized());
        assert_eq!(dag.longest_path(), Weight::from(7));
        assert_eq!(dag.vol(), Weight::from(7));
    }

    #[test]
    fn two_cycle_is_rejected() {
        let err = TypedDag::new(vec![v(1, 0), v(1, 0)], &[(0, 1), (1, 0)]).unwrap_err();
        match err {
            Error::CycleDetected { cycle } => {
                assert_eq!(cycle.first(), cycle.last());
                assert_eq!(cycle.len(), 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn self_loop_is_a_cycle() {
        assert!(matches!(
            TypedDag::new(vec![v(1, 0)], &[(0, 0)]),
            Err(Error::CycleDetected { .. })
        ));
    }

    #[test]
    fn dangling_edge() {
        assert_eq!(
            TypedDag::new(vec![v(1, 0)], &[(0, 3)]).unwrap_err(),
            Error::DanglingEdge { from: 0, to: 3 }
        );
    }

    #[test]
    fn normalize_cases() {
        let dag = chain(&[1, 2]);
        assert_eq!(dag.normalize().unwrap(), dag);

        let iso = TypedDag::new(vec![v(1, 1), v(2, 1)], &[]).unwrap();
        let n = iso.normalize().unwrap();
        assert_eq!(n.vertex_count(), 4);
        let (src, snk) = (n.source(), n.sink());
        assert_eq!(src, VertexId(2));
        assert_eq!(snk, VertexId(3));
        assert!(n.vertex(src).dummy && n.vertex(snk).dummy);
        assert_eq!(n.wcet(src), Weight::ZERO);
        assert_eq!(n.core_type(snk), CoreTypeId(0));
        assert_eq!(n.successors(src), &[VertexId(0), VertexId(1)]);
        assert_eq!(n.normalize().unwrap(), n);

        let empty = TypedDag::new(vec![], &[]).unwrap();
        assert_eq!(empty.normalize().unwrap_err(), Error::EmptyGraph);
    }

    #[test]
    fn volumes() {
        let dag = TypedDag::new(vec![v(3, 0), v(4, 1), v(5, 1)], &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(dag.vol(), Weight::from(12));
        assert_eq!(dag.vol_of_type(CoreTypeId(1)), Weight::from(9));
        assert_eq!(dag.vol_of_type(CoreTypeId(7)), Weight::ZERO);
    }

    #[test]
    fn chain_longest_path_and_path_length() {
        let dag = chain(&[1, 2, 3]);
        assert_eq!(dag.longest_path(), Weight::from(6));
        let p = Path(vec![VertexId(0), VertexId(1), VertexId(2)]);
        assert_eq!(dag.path_length(&p).unwrap(), Weight::from(6));
        assert_eq!(dag.path_length(&Path(vec![])).unwrap(), Weight::ZERO);
        assert!(matches!(
            dag.path_length(&Path(vec![VertexId(0), VertexId(2)])),
            Err(Error::NotAPath { .. })
        ));
        assert_eq!(dag.enumerate_complete_paths(10).unwrap().len(), 1);
    }

    #[test]
    fn chain_reachability() {
        let dag = chain(&[1, 1, 1]);
        let r = Reachability::new(&dag);
        assert_eq!(r.ancestors(VertexId(2)).iter().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(r.descendants(VertexId(0)).iter().collect::<Vec<_>>(), vec![1, 2]);
        let iso = TypedDag::new(vec![v(1, 0), v(1, 0)], &[]).unwrap();
        let r = Reachability::new(&iso);
        assert!(r.unordered(VertexId(0), VertexId(1)));
    }

    #[test]
    fn par_sets() {
        // src -> {a, b} -> snk, all same type
        let dag = TypedDag::new(
            vec![v(1, 0), v(2, 0), v(2, 0), v(1, 0)],
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
        )
        .unwrap();
        let r = Reachability::new(&dag);
        let par = ParSets::new(&dag, &r);
        assert!(par.get(VertexId(0)).is_empty());
        assert_eq!(par.get(VertexId(1)).iter().collect::<Vec<_>>(), vec![2]);
        assert_eq!(par.get(VertexId(2)).iter().collect::<Vec<_>>(), vec![1]);
        assert_eq!(par_set(&dag, &r, VertexId(1)), vec![VertexId(2)]);
    }

    #[test]
    fn dummies_have_empty_par() {
        let iso = TypedDag::new(vec![v(1, 0), v(2, 0), v(3, 0)], &[]).unwrap();
        let n = iso.normalize().unwrap();
        let r = Reachability::new(&n);
        let par = ParSets::new(&n, &r);
        assert!(par.get(n.source()).is_empty());
        assert!(par.get(n.sink()).is_empty());
    }

    #[test]
    fn stacked_diamonds_path_count() {
        for k in 1..6 {
            let mut vertices = vec![v(1, 0)];
            let mut edges = Vec::new();
            let mut join = 0;
            for _ in 0..k {
                let a = vertices.len();
                vertices.extend([v(1, 0), v(1, 0), v(1, 0)]);
                edges.extend([(join, a), (join, a + 1), (a, a + 2), (a + 1, a + 2)]);
                join = a + 2;
            }
            let dag = TypedDag::new(vertices, &edges).unwrap();
            assert_eq!(dag.enumerate_complete_paths(1 << 10).unwrap().len(), 1 << k);
            assert_eq!(dag.count_complete_paths(), Some(1 << k));
        }
    }

    #[test]
    fn path_explosion() {
        let dag = TypedDag::new(
            vec![v(1, 0), v(1, 0), v(1, 0), v(1, 0)],
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
        )
        .unwrap();
        assert_eq!(
            dag.enumerate_complete_paths(1).unwrap_err(),
            Error::PathExplosion { limit: 1 }
        );
    }

    #[test]
    fn platform_rejects_zero_cores() {
        assert!(Platform::new(vec![2, 0]).is_err());
        assert!(Platform::new(vec![]).is_err());
        let p = Platform::new(vec![2, 3]).unwrap();
        assert_eq!(p.max_cores(), 3);
        assert_eq!(p.with_cores(CoreTypeId(0), 20).unwrap().core_counts(), &[20, 3]);
    }
}
