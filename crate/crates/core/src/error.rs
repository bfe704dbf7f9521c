use thiserror::Error;

use crate::graph::{CoreTypeId, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("graph contains a cycle: {}", format_cycle(.cycle))]
    CycleDetected { cycle: Vec<VertexId> },

    #[error("edge ({from}, {to}) references an unknown vertex")]
    DanglingEdge { from: usize, to: usize },

    #[error("duplicate vertex id {0}")]
    DuplicateVertex(usize),

    #[error("task graph has no vertices")]
    EmptyGraph,

    #[error("task graph must have a unique source and a unique sink (normalize it first)")]
    NotNormalized,

    #[error("vertex sequence is not a path: no edge {from} -> {to}")]
    NotAPath { from: VertexId, to: VertexId },

    #[error("more than {limit} complete paths")]
    PathExplosion { limit: usize },

    #[error("vertex {vertex} has core type {core_type}, which the platform does not provide")]
    UnknownType { vertex: VertexId, core_type: CoreTypeId },

    #[error("{to} is not a successor of {from}")]
    NotASuccessor { from: VertexId, to: VertexId },

    #[error("tuples belong to different vertices ({0} and {1})")]
    VertexMismatch(VertexId, VertexId),

    #[error("tuple search exceeded the limit of {limit} retained tuples")]
    ResourceLimit { limit: usize },

    #[error("analysis exceeded its time budget")]
    Timeout,

    #[error("invalid platform: {0}")]
    InvalidPlatform(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("{0} variables is too many for truth-table enumeration (max 20)")]
    TooManyVariables(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

fn format_cycle(cycle: &[VertexId]) -> String {
    cycle.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" -> ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
