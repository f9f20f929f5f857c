use rand::Rng;

use super::{
    select_merge, Diagnostics, EdgeWeightOverlay, KernelOptions, Outcome, Proposal, Rejection,
    SuperPart,
};
use crate::error::Result;
use crate::graph::{Graph, Partition};
use crate::spectral::{fiedler_with, sign_split, threshold_split, FiedlerResult};

/// Merge, re-weight and split by the sign of the Fiedler vector.
pub fn specrecom_step<R: Rng + ?Sized>(
    graph: &Graph,
    partition: &Partition,
    rng: &mut R,
) -> Result<Proposal> {
    specrecom_step_with(graph, partition, rng, &KernelOptions::default())
}

pub fn specrecom_step_with<R: Rng + ?Sized>(
    graph: &Graph,
    partition: &Partition,
    rng: &mut R,
    options: &KernelOptions,
) -> Result<Proposal> {
    let (pair, sub, fiedler) = merge_and_solve(graph, partition, rng, options)?;
    let mut diagnostics = Diagnostics {
        super_part_size: sub.map.len(),
        threshold: Some(0.0),
        ..Diagnostics::default()
    };
    let (first, second) = sign_split(&fiedler);
    let outcome = if first.is_empty() || second.is_empty() {
        Outcome::Rejected(Rejection::EmptySide)
    } else {
        let mut scratch = vec![false; sub.graph.vertex_count()];
        if sub.graph.subset_connected(&first, &mut scratch)
            && sub.graph.subset_connected(&second, &mut scratch)
        {
            diagnostics.connected_thresholds = 1;
            Outcome::Candidate {
                first: sub.lift(&first),
                second: sub.lift(&second),
            }
        } else {
            Outcome::Rejected(Rejection::DisconnectedSide)
        }
    };
    Ok(Proposal {
        replaced_parts: pair,
        outcome,
        diagnostics,
    })
}

/// Merge, re-weight, and sweep every Fiedler entry as a split threshold,
/// keeping the best-balanced connected split.
pub fn balspecrecom_step<R: Rng + ?Sized>(
    graph: &Graph,
    partition: &Partition,
    rng: &mut R,
) -> Result<Proposal> {
    balspecrecom_step_with(graph, partition, rng, &KernelOptions::default())
}

pub fn balspecrecom_step_with<R: Rng + ?Sized>(
    graph: &Graph,
    partition: &Partition,
    rng: &mut R,
    options: &KernelOptions,
) -> Result<Proposal> {
    let (pair, sub, fiedler) = merge_and_solve(graph, partition, rng, options)?;
    let mut diagnostics = Diagnostics {
        super_part_size: sub.map.len(),
        ..Diagnostics::default()
    };
    let outcome = balanced_outcome(partition, pair, &sub, &fiedler, &mut diagnostics);
    Ok(Proposal {
        replaced_parts: pair,
        outcome,
        diagnostics,
    })
}

/// Without any connected threshold split the merged parts are kept as they
/// were, which makes the step a self-loop.
fn balanced_outcome(
    partition: &Partition,
    pair: (usize, usize),
    sub: &SuperPart,
    fiedler: &FiedlerResult,
    diagnostics: &mut Diagnostics,
) -> Outcome {
    let (choice, connected) = best_threshold_split(&sub.graph, fiedler);
    diagnostics.connected_thresholds = connected;
    match choice {
        Some(choice) => {
            diagnostics.threshold = Some(choice.threshold);
            Outcome::Candidate {
                first: sub.lift(&choice.first),
                second: sub.lift(&choice.second),
            }
        }
        None => {
            diagnostics.fallback = true;
            Outcome::Candidate {
                first: partition.part_members(pair.0),
                second: partition.part_members(pair.1),
            }
        }
    }
}

/// The split picked by the threshold sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdChoice {
    pub threshold: f64,
    /// Vertices with entry `>= threshold`, ascending.
    pub first: Vec<usize>,
    /// Vertices with entry `< threshold`, ascending.
    pub second: Vec<usize>,
    pub weight_difference: f64,
    /// Unweighted count of `graph` edges crossing the split.
    pub cut_edges: usize,
}

/// Sweeps the distinct Fiedler entries of `graph` in ascending order as
/// thresholds. Among splits with two nonempty connected sides, picks the
/// smallest `|w(first) − w(second)|`, then fewest crossing edges, then the
/// smallest threshold. Side weights are summed in ascending vertex order.
///
/// Returns the choice (if any) and the number of connected splits seen.
pub fn best_threshold_split(
    graph: &Graph,
    fiedler: &FiedlerResult,
) -> (Option<ThresholdChoice>, usize) {
    let mut thresholds = fiedler.vector.clone();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();

    let n = graph.vertex_count();
    let mut scratch = vec![false; n];
    let mut side = vec![false; n];
    let mut best: Option<ThresholdChoice> = None;
    let mut connected = 0;
    for &t in &thresholds {
        let (first, second) = threshold_split(fiedler, t);
        if first.is_empty() || second.is_empty() {
            continue;
        }
        if !graph.subset_connected(&first, &mut scratch)
            || !graph.subset_connected(&second, &mut scratch)
        {
            continue;
        }
        connected += 1;
        let difference = (graph.weight_of(&first) - graph.weight_of(&second)).abs();
        if best
            .as_ref()
            .is_some_and(|b| difference > b.weight_difference)
        {
            continue;
        }
        for &v in &first {
            side[v] = true;
        }
        let cut_edges = graph.count_crossing(&side);
        side.iter_mut().for_each(|s| *s = false);
        let better = match &best {
            None => true,
            Some(b) => {
                difference < b.weight_difference
                    || (difference == b.weight_difference && cut_edges < b.cut_edges)
            }
        };
        if better {
            best = Some(ThresholdChoice {
                threshold: t,
                first,
                second,
                weight_difference: difference,
                cut_edges,
            });
        }
    }
    (best, connected)
}

fn merge_and_solve<R: Rng + ?Sized>(
    graph: &Graph,
    partition: &Partition,
    rng: &mut R,
    options: &KernelOptions,
) -> Result<((usize, usize), SuperPart, FiedlerResult)> {
    let (_, pair) = select_merge(graph, partition, rng)?;
    let mut sub = SuperPart::merge(graph, partition, pair)?;
    EdgeWeightOverlay::for_mode(options.overlay, sub.graph.edge_count(), rng)
        .apply(&mut sub.graph)?;
    let fiedler = fiedler_with(&sub.graph, options.solver)?;
    Ok((pair, sub, fiedler))
}
