//! JSON graph and assignment files.
//!
//! Graph file:
//! `{"vertices":[{"id":"a","weight":1.0},...],"edges":[{"u":"a","v":"b","weight":1.0},...]}`
//! with both weights optional (default 1.0).
//!
//! Assignment file: `{"<vertex id>":"<part label>",...}`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{Edge, Graph, Partition, Vertex};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub u: String,
    pub v: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
}

/// Parses a graph document. Vertices keep file order.
pub fn load_graph(document: &str) -> Result<Graph> {
    let file: GraphFile =
        serde_json::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;

    let mut index = HashMap::with_capacity(file.vertices.len());
    let mut vertices = Vec::with_capacity(file.vertices.len());
    for (i, record) in file.vertices.into_iter().enumerate() {
        let weight = record.weight.unwrap_or(1.0);
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(Error::Parse(format!(
                "vertex {i} (\"{}\") has invalid weight {weight}",
                record.id
            )));
        }
        if index.insert(record.id.clone(), i).is_some() {
            return Err(Error::Parse(format!(
                "vertex {i}: duplicate vertex id \"{}\"",
                record.id
            )));
        }
        vertices.push(Vertex {
            id: record.id,
            weight,
        });
    }

    let lookup = |i: usize, id: &str| {
        index.get(id).copied().ok_or_else(|| {
            Error::Parse(format!("edge {i} references unknown vertex id \"{id}\""))
        })
    };
    let mut seen = HashMap::with_capacity(file.edges.len());
    let mut edges = Vec::with_capacity(file.edges.len());
    for (i, record) in file.edges.iter().enumerate() {
        let u = lookup(i, &record.u)?;
        let v = lookup(i, &record.v)?;
        if u == v {
            return Err(Error::Parse(format!(
                "edge {i} is a self-loop on \"{}\"",
                record.u
            )));
        }
        if let Some(previous) = seen.insert((u.min(v), u.max(v)), i) {
            return Err(Error::Parse(format!(
                "edge {i} (\"{}\"-\"{}\") duplicates edge {previous}",
                record.u, record.v
            )));
        }
        let weight = record.weight.unwrap_or(1.0);
        if !(weight.is_finite() && weight > 0.0) {
            return Err(Error::Parse(format!(
                "edge {i} (\"{}\"-\"{}\") has non-positive weight {weight}",
                record.u, record.v
            )));
        }
        edges.push(Edge { u, v, weight });
    }
    Graph::new(vertices, edges).map_err(|e| Error::Parse(e.to_string()))
}

/// Serializes a graph; every weight is written explicitly.
pub fn graph_to_json(graph: &Graph) -> String {
    let file = GraphFile {
        vertices: graph
            .vertices()
            .iter()
            .map(|v| VertexRecord {
                id: v.id.clone(),
                weight: Some(v.weight),
            })
            .collect(),
        edges: graph
            .edges()
            .iter()
            .map(|e| EdgeRecord {
                u: graph.vertices()[e.u].id.clone(),
                v: graph.vertices()[e.v].id.clone(),
                weight: Some(e.weight),
            })
            .collect(),
    };
    serde_json::to_string(&file).expect("graph serialization cannot fail")
}

/// Parses an assignment document against `graph`. Labels are compacted to
/// `0..k` in order of first appearance in the document; string and integer
/// labels are both accepted.
pub fn load_partition(document: &str, graph: &Graph) -> Result<Partition> {
    let map: Map<String, Value> =
        serde_json::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;
    let index: HashMap<&str, usize> = graph
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| (v.id.as_str(), i))
        .collect();

    let mut labels: HashMap<String, usize> = HashMap::new();
    let mut assignment = vec![usize::MAX; graph.vertex_count()];
    for (id, value) in &map {
        let label = match value {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            other => {
                return Err(Error::Parse(format!(
                    "vertex \"{id}\" has a non-scalar part label {other}"
                )))
            }
        };
        let v = *index
            .get(id.as_str())
            .ok_or_else(|| Error::Validation(format!("unknown vertex id \"{id}\"")))?;
        let next = labels.len();
        assignment[v] = *labels.entry(label).or_insert(next);
    }
    if let Some(missing) = assignment.iter().position(|&a| a == usize::MAX) {
        return Err(Error::Validation(format!(
            "vertex \"{}\" has no part label",
            graph.vertices()[missing].id
        )));
    }
    Partition::from_assignment(graph, assignment)
}

/// Serializes a partition as `{"<vertex id>":"<part index>"}` in vertex order.
pub fn partition_to_json(graph: &Graph, partition: &Partition) -> String {
    let map: Map<String, Value> = graph
        .vertices()
        .iter()
        .zip(partition.assignment())
        .map(|(v, &part)| (v.id.clone(), Value::String(part.to_string())))
        .collect();
    serde_json::to_string(&map).expect("assignment serialization cannot fail")
}
