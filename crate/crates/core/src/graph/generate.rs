use rand::seq::SliceRandom;
use rand::Rng;

use super::{Edge, Graph, Partition, Vertex};
use crate::error::{Error, Result};

/// The `side × side` 4-neighbor grid with unit weights, and the row-band
/// partition assigning row `r` to part `floor(r·k/side)`.
///
/// Vertex `r·side + c` has id `"r,c"`.
pub fn make_grid(side: usize, k: usize) -> Result<(Graph, Partition)> {
    if side == 0 || k == 0 {
        return Err(Error::InvalidArgument(
            "grid side and part count must be positive".into(),
        ));
    }
    if k > side {
        return Err(Error::InvalidArgument(format!(
            "cannot split {side} rows into {k} bands"
        )));
    }
    let index = |r: usize, c: usize| r * side + c;
    let mut vertices = Vec::with_capacity(side * side);
    let mut edges = Vec::with_capacity(2 * side * (side - 1));
    for r in 0..side {
        for c in 0..side {
            vertices.push(Vertex {
                id: format!("{r},{c}"),
                weight: 1.0,
            });
            if c + 1 < side {
                edges.push(Edge {
                    u: index(r, c),
                    v: index(r, c + 1),
                    weight: 1.0,
                });
            }
            if r + 1 < side {
                edges.push(Edge {
                    u: index(r, c),
                    v: index(r + 1, c),
                    weight: 1.0,
                });
            }
        }
    }
    let graph = Graph::new(vertices, edges)?;
    let assignment = (0..side * side).map(|v| (v / side) * k / side).collect();
    let partition = Partition::from_assignment(&graph, assignment)?;
    Ok((graph, partition))
}

/// A random connected graph on `n` vertices: a random recursive tree plus
/// each remaining vertex pair independently with probability `extra_edge_prob`.
/// Edge weights are drawn uniformly from `edge_weights`; vertex weights are 1.
pub fn random_connected_graph<R: Rng + ?Sized>(
    n: usize,
    extra_edge_prob: f64,
    edge_weights: (f64, f64),
    rng: &mut R,
) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidArgument("graph must have a vertex".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut present = vec![vec![false; n]; n];
    let mut pairs = Vec::new();
    for i in 1..n {
        let parent = order[rng.random_range(0..i)];
        let child = order[i];
        present[parent][child] = true;
        present[child][parent] = true;
        pairs.push((parent, child));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present[u][v] && rng.random_bool(extra_edge_prob) {
                pairs.push((u, v));
            }
        }
    }
    let (lo, hi) = edge_weights;
    let edges = pairs
        .into_iter()
        .map(|(u, v)| Edge {
            u,
            v,
            weight: if lo == hi { lo } else { rng.random_range(lo..=hi) },
        })
        .collect();
    let vertices = (0..n)
        .map(|i| Vertex {
            id: i.to_string(),
            weight: 1.0,
        })
        .collect();
    Graph::new(vertices, edges)
}
