//! The task file format.
//!
//! ```json
//! { "types": 2,
//!   "vertices": [ { "id": 0, "wcet": "7/2", "type": 1 } ],
//!   "edges": [ [0, 1] ],
//!   "platform": [2, 3] }
//! ```
//!
//! WCETs are JSON integers or `"p/q"` strings. Vertex ids may be sparse;
//! they are renumbered densely in file order when loaded.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CoreTypeId, Platform, TypedDag, Vertex};
use crate::weight::Weight;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskFile {
    pub types: usize,
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<[usize; 2]>,
    pub platform: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexEntry {
    pub id: usize,
    pub wcet: Weight,
    #[serde(rename = "type")]
    pub core_type: usize,
}

impl TaskFile {
    pub fn from_task(dag: &TypedDag, platform: &Platform) -> Self {
        TaskFile {
            types: platform.type_count(),
            vertices: dag
                .iter()
                .map(|(v, vertex)| VertexEntry {
                    id: v.0,
                    wcet: vertex.wcet,
                    core_type: vertex.core_type.0,
                })
                .collect(),
            edges: dag.edges().map(|(u, v)| [u.0, v.0]).collect(),
            platform: platform.core_counts().to_vec(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("task file serializes")
    }

    /// Builds and validates the task. The graph is returned as written;
    /// callers normalize it when needed.
    pub fn to_task(&self) -> Result<(TypedDag, Platform)> {
        if self.platform.len() != self.types {
            return Err(Error::Parse(format!(
                "\"types\" is {} but the platform lists {} core counts",
                self.types,
                self.platform.len()
            )));
        }
        let platform = Platform::new(self.platform.clone())?;
        let mut index = HashMap::with_capacity(self.vertices.len());
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for entry in &self.vertices {
            if index.insert(entry.id, vertices.len()).is_some() {
                return Err(Error::DuplicateVertex(entry.id));
            }
            if entry.wcet.is_negative() {
                return Err(Error::Parse(format!("vertex {} has a negative WCET", entry.id)));
            }
            vertices.push(Vertex::new(entry.wcet, CoreTypeId(entry.core_type)));
        }
        let edges = self
            .edges
            .iter()
            .map(|&[u, v]| match (index.get(&u), index.get(&v)) {
                (Some(&a), Some(&b)) => Ok((a, b)),
                _ => Err(Error::DanglingEdge { from: u, to: v }),
            })
            .collect::<Result<Vec<_>>>()?;
        let dag = TypedDag::new(vertices, &edges)?;
        platform.check_covers(&dag)?;
        Ok((dag, platform))
    }
}
