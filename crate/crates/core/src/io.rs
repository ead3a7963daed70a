//! JSON graph description files.
//!
//! ```json
//! {"alpha": 1.0,
//!  "vertices": [{"id": 0, "bc": null}, {"id": 1, "bc": "dirichlet"}],
//!  "edges": [{"from": 0, "to": 1, "length": 3.14, "potential": {"type": "zero"}, "cells": null}]}
//! ```
//!
//! Unknown keys are rejected at every level.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graph::{BoundaryCondition, Edge, MetricGraph, PotentialSpec, VertexId};
use crate::report::Expectation;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<EdgeEntry>,
    /// Expected outcome per check name, overriding the topology defaults.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub expect: BTreeMap<String, Expectation>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: usize,
    #[serde(default)]
    pub bc: Option<BoundaryCondition>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub from: usize,
    pub to: usize,
    pub length: f64,
    #[serde(default)]
    pub potential: PotentialSpec,
    #[serde(default)]
    pub cells: Option<usize>,
}

fn default_alpha() -> f64 {
    1.0
}

impl GraphFile {
    pub fn into_graph(self) -> Result<MetricGraph, GraphError> {
        let n = self.vertices.len();
        let mut boundary = vec![None; n];
        let mut seen = vec![false; n];
        for v in &self.vertices {
            if v.id >= n {
                return Err(GraphError::Parse(format!(
                    "vertices: id {} is not dense (expected ids 0..{})",
                    v.id, n
                )));
            }
            if std::mem::replace(&mut seen[v.id], true) {
                return Err(GraphError::Parse(format!("vertices: duplicate id {}", v.id)));
            }
            boundary[v.id] = v.bc;
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        for (i, e) in self.edges.into_iter().enumerate() {
            if e.from >= n || e.to >= n {
                return Err(GraphError::Parse(format!("edges[{i}]: endpoint references unknown vertex")));
            }
            edges.push(Edge {
                from: VertexId(e.from),
                to: VertexId(e.to),
                length: e.length,
                potential: e.potential,
                cells: e.cells,
            });
        }
        Ok(MetricGraph::new(self.alpha, boundary, edges))
    }

    pub fn from_graph(graph: &MetricGraph) -> Self {
        GraphFile {
            alpha: graph.alpha(),
            vertices: graph
                .boundary_conditions()
                .iter()
                .enumerate()
                .map(|(id, bc)| VertexEntry { id, bc: *bc })
                .collect(),
            edges: graph
                .edges()
                .iter()
                .map(|e| EdgeEntry {
                    from: e.from.0,
                    to: e.to.0,
                    length: e.length,
                    potential: e.potential.clone(),
                    cells: e.cells,
                })
                .collect(),
            expect: BTreeMap::new(),
        }
    }
}

pub fn parse_graph(text: &str) -> Result<MetricGraph, GraphError> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| GraphError::Parse(e.to_string()))?;
    file.into_graph()
}

pub fn read_graph(path: &Path) -> Result<MetricGraph, GraphError> {
    let text = std::fs::read_to_string(path)?;
    parse_graph(&text).map_err(|e| match e {
        GraphError::Parse(msg) => GraphError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Graph plus the expectations declared next to it.
pub fn read_graph_file(path: &Path) -> Result<(MetricGraph, BTreeMap<String, Expectation>), GraphError> {
    let text = std::fs::read_to_string(path)?;
    let located = |msg: String| GraphError::Parse(format!("{}: {msg}", path.display()));
    let file: GraphFile = serde_json::from_str(&text).map_err(|e| located(e.to_string()))?;
    let expect = file.expect.clone();
    let graph = file.into_graph().map_err(|e| match e {
        GraphError::Parse(msg) => located(msg),
        other => other,
    })?;
    graph.ensure_valid()?;
    Ok((graph, expect))
}

pub fn graph_to_json(graph: &MetricGraph) -> String {
    serde_json::to_string_pretty(&GraphFile::from_graph(graph)).expect("graph file serializes")
}
