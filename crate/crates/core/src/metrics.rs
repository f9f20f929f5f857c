//! Plan metrics and the spectral k-means baseline.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};
use crate::rng::rng_from_seed;
use crate::spectral::{spectral_embedding_with, SolverOptions};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanMetrics {
    pub cut_edges: usize,
    pub pop_dev: f64,
    pub parts_connected: bool,
    pub part_sizes: Vec<usize>,
    pub part_weights: Vec<f64>,
}

/// Number of edges whose endpoints lie in different parts, recomputed from
/// the assignment.
pub fn cut_edges(graph: &Graph, partition: &Partition) -> usize {
    let assignment = partition.assignment();
    graph
        .edges()
        .iter()
        .filter(|e| assignment[e.u] != assignment[e.v])
        .count()
}

/// `max_i |k·w(Dᵢ)/w(V) − 1|`.
pub fn pop_dev(graph: &Graph, partition: &Partition) -> Result<f64> {
    let total = graph.total_weight();
    if !(total > 0.0) {
        return Err(Error::InvalidArgument(
            "population deviation needs a positive total vertex weight".into(),
        ));
    }
    let k = partition.k() as f64;
    let mut weights = vec![0.0; partition.k()];
    for (v, &part) in partition.assignment().iter().enumerate() {
        weights[part] += graph.vertex_weight(v);
    }
    Ok(weights
        .iter()
        .map(|w| (k * w / total - 1.0).abs())
        .fold(0.0, f64::max))
}

pub fn plan_metrics(graph: &Graph, partition: &Partition) -> Result<PlanMetrics> {
    Ok(PlanMetrics {
        cut_edges: cut_edges(graph, partition),
        pop_dev: pop_dev(graph, partition)?,
        parts_connected: graph.is_connected_partition(partition)?,
        part_sizes: partition.part_sizes().to_vec(),
        part_weights: partition.part_weights().to_vec(),
    })
}

const LLOYD_MAX_ITERATIONS: usize = 500;

/// Spectral k-means: Lloyd's algorithm on the `(k−1)`-dimensional Laplacian
/// embedding, with farthest-first initialization whose first center is picked
/// by `seed`. Parts are not guaranteed to be connected.
pub fn speckmeans(graph: &Graph, k: usize, seed: u64) -> Result<Partition> {
    speckmeans_with(graph, k, seed, SolverOptions::default())
}

pub fn speckmeans_with(
    graph: &Graph,
    k: usize,
    seed: u64,
    solver: SolverOptions,
) -> Result<Partition> {
    let points = spectral_embedding_with(graph, k, solver)?;
    let labels = kmeans(&points, k, seed);
    Partition::from_labels(graph, &labels)
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

/// Index of the nearest center; ties go to the lowest center index.
fn nearest(point: &[f64], centers: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_distance = f64::INFINITY;
    for (c, center) in centers.iter().enumerate() {
        let d = squared_distance(point, center);
        if d < best_distance {
            best = c;
            best_distance = d;
        }
    }
    best
}

/// Lloyd's algorithm returning a label in `0..k` for every point, with every
/// label used at least once (requires at least `k` points).
fn kmeans(points: &[Vec<f64>], k: usize, seed: u64) -> Vec<usize> {
    let n = points.len();
    let mut rng = rng_from_seed(seed);
    let mut centers = vec![points[rng.random_range(0..n)].clone()];
    let mut closest: Vec<f64> = points
        .iter()
        .map(|p| squared_distance(p, &centers[0]))
        .collect();
    while centers.len() < k {
        let far = argmax(&closest);
        centers.push(points[far].clone());
        for (d, p) in closest.iter_mut().zip(points) {
            *d = d.min(squared_distance(p, &points[far]));
        }
    }

    let mut labels: Vec<usize> = points.iter().map(|p| nearest(p, &centers)).collect();
    for _ in 0..LLOYD_MAX_ITERATIONS {
        fill_empty_clusters(points, &mut labels, &centers, k);
        centers = centroids(points, &labels, k);
        let next: Vec<usize> = points.iter().map(|p| nearest(p, &centers)).collect();
        if next == labels {
            break;
        }
        labels = next;
    }
    fill_empty_clusters(points, &mut labels, &centers, k);
    labels
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

fn centroids(points: &[Vec<f64>], labels: &[usize], k: usize) -> Vec<Vec<f64>> {
    let dim = points.first().map_or(0, Vec::len);
    let mut sums = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (p, &l) in points.iter().zip(labels) {
        counts[l] += 1;
        for (s, x) in sums[l].iter_mut().zip(p) {
            *s += x;
        }
    }
    for (sum, &count) in sums.iter_mut().zip(&counts) {
        if count > 0 {
            sum.iter_mut().for_each(|s| *s /= count as f64);
        }
    }
    sums
}

/// Moves, for each empty cluster, the point farthest from its own center
/// (among clusters with more than one point) into the empty cluster.
fn fill_empty_clusters(points: &[Vec<f64>], labels: &mut [usize], centers: &[Vec<f64>], k: usize) {
    let mut counts = vec![0usize; k];
    for &l in labels.iter() {
        counts[l] += 1;
    }
    for empty in 0..k {
        if counts[empty] > 0 {
            continue;
        }
        let mut far = None;
        let mut far_distance = -1.0;
        for (i, p) in points.iter().enumerate() {
            let l = labels[i];
            if counts[l] < 2 {
                continue;
            }
            let d = squared_distance(p, &centers[l]);
            if d > far_distance {
                far = Some(i);
                far_distance = d;
            }
        }
        if let Some(i) = far {
            counts[labels[i]] -= 1;
            labels[i] = empty;
            counts[empty] = 1;
        }
    }
}
