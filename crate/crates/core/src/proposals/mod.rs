//! Recombination proposal kernels.
//!
//! Every kernel picks a uniformly random cut edge, merges the two parts it
//! joins into a super-part, and splits the super-part back into two pieces.
//! Kernels never touch the other parts and never mutate the input graph; the
//! random edge-weight overlay is applied to an owned copy of the super-part.

mod spectral_split;
mod tree;

pub use spectral_split::{
    balspecrecom_step, balspecrecom_step_with, best_threshold_split, specrecom_step,
    specrecom_step_with, ThresholdChoice,
};
pub use tree::{balance_edges, treerecom_step, uniform_spanning_tree, SpanningTree};

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};
use crate::spectral::SolverOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    /// One side of the spectral split was empty.
    EmptySide,
    /// One side of the spectral split induced a disconnected subgraph.
    DisconnectedSide,
    /// The sampled spanning tree had no ε-balance edge.
    NoBalanceEdge,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rejection::EmptySide => "empty split side",
            Rejection::DisconnectedSide => "disconnected split side",
            Rejection::NoBalanceEdge => "no balance edge in spanning tree",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    /// Replacement vertex sets (indices into the full graph, ascending) for
    /// the first and second replaced part.
    Candidate { first: Vec<usize>, second: Vec<usize> },
    Rejected(Rejection),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    pub super_part_size: usize,
    /// Threshold chosen by the balanced sweep.
    pub threshold: Option<f64>,
    /// Number of thresholds whose split had two connected sides.
    pub connected_thresholds: usize,
    /// The balanced sweep found no connected split and kept the old parts.
    pub fallback: bool,
    /// Number of ε-balance edges in the sampled spanning tree.
    pub balance_edges: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Proposal {
    /// The merged parts, smaller index first.
    pub replaced_parts: (usize, usize),
    pub outcome: Outcome,
    pub diagnostics: Diagnostics,
}

impl Proposal {
    pub fn is_candidate(&self) -> bool {
        matches!(self.outcome, Outcome::Candidate { .. })
    }

    pub fn rejection(&self) -> Option<Rejection> {
        match self.outcome {
            Outcome::Rejected(r) => Some(r),
            Outcome::Candidate { .. } => None,
        }
    }

    /// The partition obtained by replacing the two merged parts. The first
    /// new set keeps the first part's label.
    pub fn apply(&self, graph: &Graph, partition: &Partition) -> Result<Partition> {
        match &self.outcome {
            Outcome::Candidate { first, second } => {
                partition.with_parts_replaced(graph, self.replaced_parts, first, second)
            }
            Outcome::Rejected(r) => Err(Error::InvalidState(format!(
                "cannot apply a rejected proposal ({r})"
            ))),
        }
    }
}

/// How super-part edge weights are set before the spectral split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OverlayMode {
    /// Independent uniform draws from `[1, 2]`.
    Random,
    /// Every edge gets the same weight. Removes the kernel's randomness in the
    /// split; meant for tests.
    Constant(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelOptions {
    pub overlay: OverlayMode,
    pub solver: SolverOptions,
}

impl Default for KernelOptions {
    fn default() -> Self {
        Self {
            overlay: OverlayMode::Random,
            solver: SolverOptions::default(),
        }
    }
}

/// Replacement edge weights for one super-part, discarded after the step.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeWeightOverlay {
    weights: Vec<f64>,
}

impl EdgeWeightOverlay {
    pub fn sample<R: Rng + ?Sized>(edge_count: usize, rng: &mut R) -> Self {
        Self {
            weights: (0..edge_count).map(|_| rng.random_range(1.0..=2.0)).collect(),
        }
    }

    pub fn constant(edge_count: usize, weight: f64) -> Self {
        Self {
            weights: vec![weight; edge_count],
        }
    }

    fn for_mode<R: Rng + ?Sized>(mode: OverlayMode, edge_count: usize, rng: &mut R) -> Self {
        match mode {
            OverlayMode::Random => Self::sample(edge_count, rng),
            OverlayMode::Constant(w) => Self::constant(edge_count, w),
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn apply(&self, graph: &mut Graph) -> Result<()> {
        graph.set_edge_weights(&self.weights)
    }
}

/// Picks a cut edge uniformly at random and returns it with the pair of parts
/// it joins (smaller index first).
pub fn select_merge<R: Rng + ?Sized>(
    graph: &Graph,
    partition: &Partition,
    rng: &mut R,
) -> Result<(usize, (usize, usize))> {
    let cut = partition.cut_edges();
    if partition.k() < 2 || cut.is_empty() {
        return Err(Error::InvalidState(
            "partition has no cut edges to recombine across".into(),
        ));
    }
    let edge = cut[rng.random_range(0..cut.len())];
    let e = graph.edge(edge);
    let (a, b) = (partition.part_of(e.u), partition.part_of(e.v));
    Ok((edge, (a.min(b), a.max(b))))
}

/// A merged pair of parts as an owned subgraph.
pub(crate) struct SuperPart {
    pub graph: Graph,
    /// Local vertex index → full-graph vertex index (ascending).
    pub map: Vec<usize>,
}

impl SuperPart {
    pub fn merge(graph: &Graph, partition: &Partition, (a, b): (usize, usize)) -> Result<Self> {
        let members: Vec<usize> = (0..graph.vertex_count())
            .filter(|&v| {
                let p = partition.part_of(v);
                p == a || p == b
            })
            .collect();
        let (graph, map) = graph.induced_subgraph(&members)?;
        Ok(Self { graph, map })
    }

    pub fn lift(&self, local: &[usize]) -> Vec<usize> {
        local.iter().map(|&v| self.map[v]).collect()
    }
}
