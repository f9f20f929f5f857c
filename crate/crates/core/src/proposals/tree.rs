use rand::Rng;

use super::{select_merge, Diagnostics, Outcome, Proposal, Rejection, SuperPart};
use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};

/// A rooted spanning tree stored as parent pointers.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    pub root: usize,
    /// `parent[root] == usize::MAX`.
    pub parent: Vec<usize>,
    /// Vertices ordered so that every parent precedes its children.
    pub order: Vec<usize>,
}

impl SpanningTree {
    /// Sorted graph edge indices of the tree; a canonical key for the tree.
    pub fn edge_indices(&self, graph: &Graph) -> Vec<usize> {
        let mut edges: Vec<usize> = (0..self.parent.len())
            .filter(|&v| v != self.root)
            .map(|v| {
                let p = self.parent[v];
                graph
                    .neighbors(v)
                    .iter()
                    .find(|&&(w, _)| w == p)
                    .map(|&(_, e)| e)
                    .expect("tree edge exists in graph")
            })
            .collect();
        edges.sort_unstable();
        edges
    }

    /// Total vertex weight of each vertex's subtree.
    pub fn subtree_weights(&self, graph: &Graph) -> Vec<f64> {
        let mut weight: Vec<f64> = (0..self.parent.len())
            .map(|v| graph.vertex_weight(v))
            .collect();
        for &v in self.order.iter().rev() {
            if v != self.root {
                weight[self.parent[v]] += weight[v];
            }
        }
        weight
    }
}

/// Uniformly random spanning tree of a connected graph, by Wilson's
/// loop-erased random walk algorithm. Edge weights are ignored.
pub fn uniform_spanning_tree<R: Rng + ?Sized>(graph: &Graph, rng: &mut R) -> Result<SpanningTree> {
    let n = graph.vertex_count();
    if !graph.is_connected()? {
        return Err(Error::Precondition(
            "spanning tree of a disconnected graph".into(),
        ));
    }
    let root = rng.random_range(0..n);
    let mut in_tree = vec![false; n];
    let mut next = vec![usize::MAX; n];
    in_tree[root] = true;
    for start in 0..n {
        let mut u = start;
        while !in_tree[u] {
            let neighbors = graph.neighbors(u);
            next[u] = neighbors[rng.random_range(0..neighbors.len())].0;
            u = next[u];
        }
        u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            u = next[u];
        }
    }

    let mut children = vec![Vec::new(); n];
    for v in 0..n {
        if v != root {
            children[next[v]].push(v);
        }
    }
    let mut order = Vec::with_capacity(n);
    order.push(root);
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        order.extend_from_slice(&children[u]);
    }
    Ok(SpanningTree {
        root,
        parent: next,
        order,
    })
}

/// Tree edges (identified by their child vertex, ascending) whose removal
/// leaves two components `h₁, h₂` with `max |k·w(hᵢ)/total − 1| ≤ eps`.
pub fn balance_edges(
    graph: &Graph,
    tree: &SpanningTree,
    k: usize,
    total_weight: f64,
    eps: f64,
) -> Vec<usize> {
    let subtree = tree.subtree_weights(graph);
    let whole = subtree[tree.root];
    let deviation = |w: f64| (k as f64 * w / total_weight - 1.0).abs();
    (0..graph.vertex_count())
        .filter(|&v| v != tree.root)
        .filter(|&v| deviation(subtree[v]).max(deviation(whole - subtree[v])) <= eps)
        .collect()
}

/// Spanning-tree recombination: merge two adjacent parts, draw a uniform
/// spanning tree of the merged region, and cut a uniformly chosen ε-balance
/// edge. A tree without balance edges is a rejection.
pub fn treerecom_step<R: Rng + ?Sized>(
    graph: &Graph,
    partition: &Partition,
    eps: f64,
    rng: &mut R,
) -> Result<Proposal> {
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "balance tolerance must be nonnegative, got {eps}"
        )));
    }
    let total = graph.total_weight();
    if total <= 0.0 {
        return Err(Error::InvalidArgument(
            "graph has zero total vertex weight".into(),
        ));
    }
    let (_, pair) = select_merge(graph, partition, rng)?;
    let sub = SuperPart::merge(graph, partition, pair)?;
    let tree = uniform_spanning_tree(&sub.graph, rng)?;
    let candidates = balance_edges(&sub.graph, &tree, partition.k(), total, eps);
    let diagnostics = Diagnostics {
        super_part_size: sub.map.len(),
        balance_edges: candidates.len(),
        ..Diagnostics::default()
    };
    if candidates.is_empty() {
        return Ok(Proposal {
            replaced_parts: pair,
            outcome: Outcome::Rejected(Rejection::NoBalanceEdge),
            diagnostics,
        });
    }
    let cut = candidates[rng.random_range(0..candidates.len())];

    let mut below = vec![false; sub.graph.vertex_count()];
    for &v in &tree.order {
        below[v] = v == cut || (v != tree.root && below[tree.parent[v]]);
    }
    let (first, second): (Vec<usize>, Vec<usize>) =
        (0..sub.graph.vertex_count()).partition(|&v| below[v]);
    Ok(Proposal {
        replaced_parts: pair,
        outcome: Outcome::Candidate {
            first: sub.lift(&first),
            second: sub.lift(&second),
        },
        diagnostics,
    })
}
