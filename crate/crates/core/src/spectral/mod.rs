//! Laplacian spectra: Fiedler vectors, sign and threshold bipartitions, and
//! low-dimensional spectral embeddings.

mod eigen;
mod laplacian;

pub use eigen::{Eigenpair, SolverStrategy, DENSE_LIMIT};
pub use laplacian::{laplacian, Laplacian};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_TOL: f64 = 1e-8;

/// Entries smaller than this (relative to the largest entry) are set to
/// exactly zero, so that vertices whose exact entry is zero land on the
/// nonnegative side.
const ZERO_SNAP: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub strategy: SolverStrategy,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            strategy: SolverStrategy::Auto,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

/// Second-smallest Laplacian eigenpair. `vector` has unit norm, is
/// orthogonal to the all-ones vector, and its largest-magnitude entry is
/// positive (lowest index among ties).
#[derive(Debug, Clone, PartialEq)]
pub struct FiedlerResult {
    pub lambda2: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
}

pub fn fiedler(graph: &Graph, tol: f64) -> Result<FiedlerResult> {
    fiedler_with(graph, SolverOptions::with_tol(tol))
}

pub fn fiedler_with(graph: &Graph, options: SolverOptions) -> Result<FiedlerResult> {
    let lap = laplacian(graph)?;
    let mut pairs = lowest_pairs(graph, &lap, 1, options)?;
    let Eigenpair { value, vector } = pairs.remove(0);
    let residual = lap.residual(value, &vector);
    Ok(FiedlerResult {
        lambda2: value,
        vector,
        residual,
    })
}

/// Normalized eigenpairs 2..=count+1 with residual checks.
fn lowest_pairs(
    graph: &Graph,
    lap: &Laplacian,
    count: usize,
    options: SolverOptions,
) -> Result<Vec<Eigenpair>> {
    let n = graph.vertex_count();
    if n < 2 {
        return Err(Error::Precondition(format!(
            "spectral split needs at least 2 vertices, got {n}"
        )));
    }
    if count >= n {
        return Err(Error::InvalidArgument(format!(
            "requested {count} nontrivial eigenvectors of a {n}-vertex graph"
        )));
    }
    if !graph.is_connected()? {
        return Err(Error::Precondition(
            "graph is disconnected; its algebraic connectivity is zero".into(),
        ));
    }
    let mut pairs = eigen::lowest_nontrivial(lap, count, options.tol, options.strategy)?;
    for pair in &mut pairs {
        normalize(&mut pair.vector);
        let residual = lap.residual(pair.value, &pair.vector);
        if !(residual <= options.tol) {
            return Err(Error::Solver {
                iterations: 0,
                residual,
            });
        }
    }
    Ok(pairs)
}

/// Projects out the constant direction, scales to unit norm, fixes the sign
/// and snaps numerically-zero entries to zero.
fn normalize(x: &mut [f64]) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    x.iter_mut().for_each(|v| *v -= mean);
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    let max_abs = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let anchor = x
        .iter()
        .position(|v| max_abs - v.abs() <= 1e-9 * max_abs)
        .unwrap_or(0);
    if x[anchor] < 0.0 {
        x.iter_mut().for_each(|v| *v = -*v);
    }
    for v in x.iter_mut() {
        if v.abs() <= ZERO_SNAP * max_abs {
            *v = 0.0;
        }
    }
}

/// `({v : f[v] ≥ 0}, {v : f[v] < 0})`.
pub fn sign_split(fiedler: &FiedlerResult) -> (Vec<usize>, Vec<usize>) {
    threshold_split(fiedler, 0.0)
}

/// `({v : f[v] ≥ t}, {v : f[v] < t})`; either side may be empty.
pub fn threshold_split(fiedler: &FiedlerResult, threshold: f64) -> (Vec<usize>, Vec<usize>) {
    (0..fiedler.vector.len()).partition(|&v| fiedler.vector[v] >= threshold)
}

/// Per-vertex coordinates `(u₂[v], …, u_k[v])` from the eigenvectors of the
/// `k` smallest Laplacian eigenvalues, dropping the constant one.
pub fn spectral_embedding(graph: &Graph, k: usize, tol: f64) -> Result<Vec<Vec<f64>>> {
    spectral_embedding_with(graph, k, SolverOptions::with_tol(tol))
}

pub fn spectral_embedding_with(
    graph: &Graph,
    k: usize,
    options: SolverOptions,
) -> Result<Vec<Vec<f64>>> {
    if k < 2 || k > graph.vertex_count() {
        return Err(Error::InvalidArgument(format!(
            "embedding dimension k={k} must satisfy 2 <= k <= {}",
            graph.vertex_count()
        )));
    }
    let lap = laplacian(graph)?;
    let pairs = lowest_pairs(graph, &lap, k - 1, options)?;
    Ok((0..graph.vertex_count())
        .map(|v| pairs.iter().map(|p| p.vector[v]).collect())
        .collect())
}
