//! Vertex-weighted graphs, partitions of them, and the JSON file formats.

mod generate;
mod io;
mod partition;

pub use generate::{make_grid, random_connected_graph};
pub use io::{
    graph_to_json, load_graph, load_partition, partition_to_json, GraphFile, VertexRecord,
    EdgeRecord,
};
pub use partition::Partition;

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: String,
    pub weight: f64,
}

/// An undirected edge with `u < v`.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// A simple undirected graph with vertex and edge weights.
///
/// Vertices are addressed by their dense index `0..n`; the string id is kept
/// only for file I/O. The adjacency lists store `(neighbor, edge index)` pairs
/// in edge-insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges, out-of-range
    /// endpoints and invalid weights. Edge endpoints are stored with `u < v`.
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self> {
        let n = vertices.len();
        for (i, vertex) in vertices.iter().enumerate() {
            if !(vertex.weight.is_finite() && vertex.weight >= 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "vertex {i} ({}) has invalid weight {}",
                    vertex.id, vertex.weight
                )));
            }
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); n];
        let mut normalized = Vec::with_capacity(edges.len());
        for (index, edge) in edges.into_iter().enumerate() {
            let (u, v) = (edge.u.min(edge.v), edge.u.max(edge.v));
            if v >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge {index} references vertex {v} but the graph has {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidArgument(format!(
                    "edge {index} is a self-loop on vertex {u}"
                )));
            }
            if !(edge.weight.is_finite() && edge.weight > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "edge {index} ({u}, {v}) has non-positive weight {}",
                    edge.weight
                )));
            }
            if !seen.insert((u, v)) {
                return Err(Error::InvalidArgument(format!(
                    "edge {index} duplicates edge ({u}, {v})"
                )));
            }
            adjacency[u].push((v, index));
            adjacency[v].push((u, index));
            normalized.push(Edge {
                u,
                v,
                weight: edge.weight,
            });
        }
        Ok(Self {
            vertices,
            edges: normalized,
            adjacency,
        })
    }

    /// Convenience constructor: unit weights, ids `"0".."n-1"`.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let vertices = (0..n)
            .map(|i| Vertex {
                id: i.to_string(),
                weight: 1.0,
            })
            .collect();
        let edges = edges
            .iter()
            .map(|&(u, v)| Edge { u, v, weight: 1.0 })
            .collect();
        Self::new(vertices, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &Edge {
        &self.edges[index]
    }

    pub fn vertex_weight(&self, v: usize) -> f64 {
        self.vertices[v].weight
    }

    pub fn total_weight(&self) -> f64 {
        self.vertices.iter().map(|v| v.weight).sum()
    }

    /// `(neighbor, edge index)` pairs incident to `v`.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Replaces every edge weight. Used for the per-step random overlay on
    /// an owned super-part subgraph; the input graph is never touched.
    pub fn set_edge_weights(&mut self, weights: &[f64]) -> Result<()> {
        if weights.len() != self.edges.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} edge weights, got {}",
                self.edges.len(),
                weights.len()
            )));
        }
        if let Some(bad) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "edge weights must be positive, got {bad}"
            )));
        }
        for (edge, &w) in self.edges.iter_mut().zip(weights) {
            edge.weight = w;
        }
        Ok(())
    }

    /// Sum of vertex weights over `set`, accumulated in the order given.
    pub fn weight_of(&self, set: &[usize]) -> f64 {
        set.iter().map(|&v| self.vertices[v].weight).sum()
    }

    /// The subgraph induced by `set`, plus the map from new indices to old.
    ///
    /// New vertex `i` is `set[i]`; edges keep their relative order from `self`.
    pub fn induced_subgraph(&self, set: &[usize]) -> Result<(Graph, Vec<usize>)> {
        if set.is_empty() {
            return Err(Error::InvalidArgument(
                "induced subgraph of an empty vertex set".into(),
            ));
        }
        let n = self.vertex_count();
        let mut local = vec![usize::MAX; n];
        for (i, &v) in set.iter().enumerate() {
            if v >= n {
                return Err(Error::InvalidArgument(format!(
                    "vertex index {v} out of range for a graph with {n} vertices"
                )));
            }
            if local[v] != usize::MAX {
                return Err(Error::InvalidArgument(format!(
                    "vertex index {v} appears twice"
                )));
            }
            local[v] = i;
        }
        let vertices: Vec<Vertex> = set.iter().map(|&v| self.vertices[v].clone()).collect();
        let mut edges = Vec::new();
        let mut adjacency = vec![Vec::new(); set.len()];
        for edge in &self.edges {
            let (a, b) = (local[edge.u], local[edge.v]);
            if a == usize::MAX || b == usize::MAX {
                continue;
            }
            let index = edges.len();
            adjacency[a].push((b, index));
            adjacency[b].push((a, index));
            edges.push(Edge {
                u: a.min(b),
                v: a.max(b),
                weight: edge.weight,
            });
        }
        Ok((
            Graph {
                vertices,
                edges,
                adjacency,
            },
            set.to_vec(),
        ))
    }

    /// True iff a traversal from vertex 0 reaches every vertex.
    pub fn is_connected(&self) -> Result<bool> {
        let n = self.vertex_count();
        if n == 0 {
            return Err(Error::InvalidArgument(
                "connectivity of an empty graph".into(),
            ));
        }
        let mask = vec![true; n];
        Ok(self.reach_within(0, &mask) == n)
    }

    /// True iff the vertices of `set` induce a connected subgraph. `scratch`
    /// must have one entry per vertex and be all-false; it is left all-false.
    pub(crate) fn subset_connected(&self, set: &[usize], scratch: &mut [bool]) -> bool {
        let Some(&start) = set.first() else {
            return false;
        };
        for &v in set {
            scratch[v] = true;
        }
        let reached = self.reach_within(start, scratch);
        for &v in set {
            scratch[v] = false;
        }
        reached == set.len()
    }

    /// Number of vertices reachable from `start` through vertices where
    /// `mask` is set.
    fn reach_within(&self, start: usize, mask: &[bool]) -> usize {
        let mut visited = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([start]);
        visited[start] = true;
        let mut count = 0;
        while let Some(u) = queue.pop_front() {
            count += 1;
            for &(w, _) in &self.adjacency[u] {
                if mask[w] && !visited[w] {
                    visited[w] = true;
                    queue.push_back(w);
                }
            }
        }
        count
    }

    /// Edges of `self` with exactly one endpoint in the side marked by `side`.
    pub(crate) fn count_crossing(&self, side: &[bool]) -> usize {
        self.edges
            .iter()
            .filter(|e| side[e.u] != side[e.v])
            .count()
    }

    /// True iff every part of `partition` induces a connected subgraph.
    pub fn is_connected_partition(&self, partition: &Partition) -> Result<bool> {
        if partition.vertex_count() != self.vertex_count() {
            return Err(Error::InvalidArgument(format!(
                "partition covers {} vertices but the graph has {}",
                partition.vertex_count(),
                self.vertex_count()
            )));
        }
        let mut scratch = vec![false; self.vertex_count()];
        Ok(partition
            .members()
            .iter()
            .all(|part| self.subset_connected(part, &mut scratch)))
    }
}
