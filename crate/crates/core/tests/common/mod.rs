//! Independent reference implementations shared by the integration tests.
//! Nothing here calls into the library's spectral or sweep code.

#![allow(dead_code)]

use std::collections::VecDeque;

use rand::Rng;
use specchain::graph::{Edge, Vertex};
use specchain::Graph;

/// Dense Laplacian assembled straight from the edge list.
pub fn dense_laplacian(graph: &Graph) -> Vec<Vec<f64>> {
    let n = graph.vertex_count();
    let mut l = vec![vec![0.0; n]; n];
    for e in graph.edges() {
        l[e.u][e.u] += e.weight;
        l[e.v][e.v] += e.weight;
        l[e.u][e.v] -= e.weight;
        l[e.v][e.u] -= e.weight;
    }
    l
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns
/// eigenvalues ascending with matching unit eigenvectors.
pub fn jacobi_eigen(matrix: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = matrix.len();
    let mut a = matrix.to_vec();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = order
        .iter()
        .map(|&i| (0..n).map(|k| v[k][i]).collect())
        .collect();
    (values, vectors)
}

/// `‖L·x − λ·x‖` with the dense Laplacian.
pub fn dense_residual(l: &[Vec<f64>], lambda: f64, x: &[f64]) -> f64 {
    l.iter()
        .zip(x)
        .map(|(row, xi)| {
            let lx: f64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
            (lx - lambda * xi).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

/// Breadth-first connectivity of the subgraph induced by `set`.
pub fn induces_connected(graph: &Graph, set: &[usize]) -> bool {
    let Some(&start) = set.first() else {
        return false;
    };
    let mut inside = vec![false; graph.vertex_count()];
    for &v in set {
        inside[v] = true;
    }
    let mut seen = vec![false; graph.vertex_count()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for e in graph.edges() {
            let w = if e.u == u {
                e.v
            } else if e.v == u {
                e.u
            } else {
                continue;
            };
            if inside[w] && !seen[w] {
                seen[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count == set.len()
}

/// Brute-force balanced threshold sweep: enumerate every distinct entry as a
/// threshold, keep splits with two connected sides, and take the
/// lexicographic minimum of (weight difference, cut edges, threshold).
/// Returns `(threshold, side with entries >= threshold)`.
pub fn brute_force_sweep(graph: &Graph, vector: &[f64]) -> Option<(f64, Vec<usize>)> {
    let n = vector.len();
    let mut thresholds: Vec<f64> = vector.to_vec();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();
    let mut candidates = Vec::new();
    for &t in &thresholds {
        let high: Vec<usize> = (0..n).filter(|&v| vector[v] >= t).collect();
        let low: Vec<usize> = (0..n).filter(|&v| vector[v] < t).collect();
        if high.is_empty() || low.is_empty() {
            continue;
        }
        if !induces_connected(graph, &high) || !induces_connected(graph, &low) {
            continue;
        }
        let wh: f64 = high.iter().map(|&v| graph.vertex_weight(v)).sum();
        let wl: f64 = low.iter().map(|&v| graph.vertex_weight(v)).sum();
        let cut = graph
            .edges()
            .iter()
            .filter(|e| (vector[e.u] >= t) != (vector[e.v] >= t))
            .count();
        candidates.push(((wh - wl).abs(), cut, t, high));
    }
    candidates
        .into_iter()
        .min_by(|a, b| {
            a.0.total_cmp(&b.0)
                .then(a.1.cmp(&b.1))
                .then(a.2.total_cmp(&b.2))
        })
        .map(|(_, _, t, high)| (t, high))
}

/// Random connected graph built here (spanning path over a shuffled order
/// plus random chords), with edge weights in `weights` and the given vertex
/// weight sampler.
pub fn random_graph<R: Rng>(
    rng: &mut R,
    n: usize,
    chord_prob: f64,
    weights: (f64, f64),
    mut vertex_weight: impl FnMut(&mut R) -> f64,
) -> Graph {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut adjacent = vec![vec![false; n]; n];
    let mut pairs = Vec::new();
    for i in 1..n {
        let (a, b) = (order[rng.random_range(0..i)], order[i]);
        adjacent[a][b] = true;
        adjacent[b][a] = true;
        pairs.push((a.min(b), a.max(b)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !adjacent[u][v] && rng.random_bool(chord_prob) {
                pairs.push((u, v));
            }
        }
    }
    let vertices = (0..n)
        .map(|i| Vertex {
            id: i.to_string(),
            weight: vertex_weight(rng),
        })
        .collect();
    let edges = pairs
        .into_iter()
        .map(|(u, v)| Edge {
            u,
            v,
            weight: if weights.0 == weights.1 {
                weights.0
            } else {
                rng.random_range(weights.0..=weights.1)
            },
        })
        .collect();
    Graph::new(vertices, edges).unwrap()
}
