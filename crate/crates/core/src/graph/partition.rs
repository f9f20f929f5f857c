use std::collections::HashMap;

use super::Graph;
use crate::error::{Error, Result};

/// Assignment of every vertex to one of `k` nonempty parts, with cached
/// per-part weights and the sorted list of cut edge indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    assignment: Vec<usize>,
    k: usize,
    part_weights: Vec<f64>,
    part_sizes: Vec<usize>,
    cut_edges: Vec<usize>,
}

impl Partition {
    /// Builds a partition from part indices `0..k`, where `k` is one more than
    /// the largest index. Every part must be nonempty.
    pub fn from_assignment(graph: &Graph, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != graph.vertex_count() {
            return Err(Error::InvalidArgument(format!(
                "assignment has {} entries but the graph has {} vertices",
                assignment.len(),
                graph.vertex_count()
            )));
        }
        let k = assignment.iter().max().map_or(0, |&m| m + 1);
        let mut part_sizes = vec![0usize; k];
        for &part in &assignment {
            part_sizes[part] += 1;
        }
        if let Some(empty) = part_sizes.iter().position(|&s| s == 0) {
            return Err(Error::Validation(format!("part {empty} is empty")));
        }
        let (part_weights, cut_edges) = compute_caches(graph, &assignment, k);
        Ok(Self {
            assignment,
            k,
            part_weights,
            part_sizes,
            cut_edges,
        })
    }

    /// Builds a partition from arbitrary labels, compacting them to `0..k` in
    /// order of first appearance along the vertex order.
    pub fn from_labels<L: std::hash::Hash + Eq + Clone>(
        graph: &Graph,
        labels: &[L],
    ) -> Result<Self> {
        let mut index: HashMap<L, usize> = HashMap::new();
        let assignment = labels
            .iter()
            .map(|label| {
                let next = index.len();
                *index.entry(label.clone()).or_insert(next)
            })
            .collect();
        Self::from_assignment(graph, assignment)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn part_weights(&self) -> &[f64] {
        &self.part_weights
    }

    pub fn part_sizes(&self) -> &[usize] {
        &self.part_sizes
    }

    /// Sorted indices of the edges whose endpoints lie in different parts.
    pub fn cut_edges(&self) -> &[usize] {
        &self.cut_edges
    }

    /// Vertex lists of every part, each in increasing vertex order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut parts: Vec<Vec<usize>> = self
            .part_sizes
            .iter()
            .map(|&s| Vec::with_capacity(s))
            .collect();
        for (v, &part) in self.assignment.iter().enumerate() {
            parts[part].push(v);
        }
        parts
    }

    /// Vertices of a single part, in increasing order.
    pub fn part_members(&self, part: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|&(_, &p)| p == part)
            .map(|(v, _)| v)
            .collect()
    }

    /// Returns a new partition in which parts `first` and `second` are
    /// replaced by the vertex sets `new_first` and `new_second`. The two new
    /// sets must exactly cover the two old parts.
    pub fn with_parts_replaced(
        &self,
        graph: &Graph,
        (first, second): (usize, usize),
        new_first: &[usize],
        new_second: &[usize],
    ) -> Result<Self> {
        if first == second || first >= self.k || second >= self.k {
            return Err(Error::InvalidArgument(format!(
                "cannot replace parts ({first}, {second}) of a {}-partition",
                self.k
            )));
        }
        if new_first.is_empty() || new_second.is_empty() {
            return Err(Error::InvalidArgument("replacement part is empty".into()));
        }
        let expected = self.part_sizes[first] + self.part_sizes[second];
        if new_first.len() + new_second.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "replacement parts cover {} vertices, expected {expected}",
                new_first.len() + new_second.len()
            )));
        }
        let mut assignment = self.assignment.clone();
        let mut touched = vec![false; assignment.len()];
        for (set, label) in [(new_first, first), (new_second, second)] {
            for &v in set {
                let old = *assignment.get(v).ok_or_else(|| {
                    Error::InvalidArgument(format!("vertex {v} out of range"))
                })?;
                if (old != first && old != second) || touched[v] {
                    return Err(Error::InvalidArgument(format!(
                        "vertex {v} is not a unique member of the replaced parts"
                    )));
                }
                touched[v] = true;
                assignment[v] = label;
            }
        }
        Self::from_assignment(graph, assignment)
    }

    /// Checks every cached quantity against a from-scratch recomputation.
    pub fn verify(&self, graph: &Graph) -> Result<()> {
        if self.assignment.len() != graph.vertex_count() {
            return Err(Error::Validation("assignment length mismatch".into()));
        }
        let mut sizes = vec![0usize; self.k];
        for &part in &self.assignment {
            if part >= self.k {
                return Err(Error::Validation(format!("part index {part} >= k")));
            }
            sizes[part] += 1;
        }
        if sizes != self.part_sizes || sizes.contains(&0) {
            return Err(Error::Validation("part sizes out of date or empty".into()));
        }
        let (weights, cut) = compute_caches(graph, &self.assignment, self.k);
        if weights != self.part_weights {
            return Err(Error::Validation("part weights out of date".into()));
        }
        if cut != self.cut_edges {
            return Err(Error::Validation("cut edge cache out of date".into()));
        }
        Ok(())
    }
}

fn compute_caches(graph: &Graph, assignment: &[usize], k: usize) -> (Vec<f64>, Vec<usize>) {
    let mut weights = vec![0.0; k];
    for (v, &part) in assignment.iter().enumerate() {
        weights[part] += graph.vertex_weight(v);
    }
    let cut = graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| assignment[e.u] != assignment[e.v])
        .map(|(i, _)| i)
        .collect();
    (weights, cut)
}
