//! Worst-case response-time analysis for typed DAG tasks on heterogeneous
//! multi-core platforms.
//!
//! A task is a DAG whose vertices are sequential code segments, each bound
//! to one core type; the platform has `M_s` identical cores of every type
//! `s`. The crate computes three safe response-time bounds for any
//! work-conserving scheduler:
//!
//! * [`bounds::old_b`]: the classic bound, which may grow when cores are added;
//! * [`bounds::new_b_1`]: a scaled-graph bound that never does;
//! * [`bounds::new_b_2`]: a per-path interference bound, computed exactly by a
//!   polynomial-for-fixed-`|S|` search with dominance pruning.
//!
//! Around them sit a list-scheduling [`simulator`], random workload and
//! 3-SAT instance [`generator`]s, and evaluation [`experiments`]. All time
//! values are exact rationals ([`Weight`]).

pub mod bitset;
pub mod bounds;
pub mod error;
pub mod experiments;
pub mod fixtures;
pub mod generator;
pub mod graph;
pub mod io;
pub mod report;
pub mod simulator;
pub mod weight;

pub use bounds::{new_b_1, new_b_2, new_b_2_bruteforce, old_b, PreparedTask};
pub use error::{Error, Result};
pub use graph::{CoreTypeId, Path, Platform, TypedDag, Vertex, VertexId};
pub use report::{analyze, AnalyzeOptions, BoundReport};
pub use weight::Weight;
