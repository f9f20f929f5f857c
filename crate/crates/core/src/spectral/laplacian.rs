use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Sparse weighted Laplacian `L = D − A` of a graph.
#[derive(Debug, Clone)]
pub struct Laplacian {
    diagonal: Vec<f64>,
    /// Row-wise off-diagonal entries `(column, −w(uv))`.
    off_diagonal: Vec<Vec<(usize, f64)>>,
}

/// Laplacian of `graph` under its current edge weights.
pub fn laplacian(graph: &Graph) -> Result<Laplacian> {
    let n = graph.vertex_count();
    if n == 0 {
        return Err(Error::InvalidArgument("Laplacian of an empty graph".into()));
    }
    let mut diagonal = vec![0.0; n];
    let mut off_diagonal = vec![Vec::new(); n];
    for (v, row) in off_diagonal.iter_mut().enumerate() {
        for &(w, e) in graph.neighbors(v) {
            let weight = graph.edge(e).weight;
            diagonal[v] += weight;
            row.push((w, -weight));
        }
    }
    Ok(Laplacian {
        diagonal,
        off_diagonal,
    })
}

impl Laplacian {
    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub(crate) fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.off_diagonal[i]
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        if row == col {
            return self.diagonal[row];
        }
        self.off_diagonal[row]
            .iter()
            .find(|&&(c, _)| c == col)
            .map_or(0.0, |&(_, w)| w)
    }

    pub fn max_diagonal(&self) -> f64 {
        self.diagonal.iter().copied().fold(0.0, f64::max)
    }

    /// `y = L x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = self.diagonal[i] * x[i];
            for &(j, w) in &self.off_diagonal[i] {
                acc += w * x[j];
            }
            *yi = acc;
        }
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let mut y = vec![0.0; self.dim()];
        self.apply(x, &mut y);
        x.iter().zip(&y).map(|(a, b)| a * b).sum()
    }

    /// `‖L x − λ x‖₂`.
    pub fn residual(&self, value: f64, x: &[f64]) -> f64 {
        let mut y = vec![0.0; self.dim()];
        self.apply(x, &mut y);
        y.iter()
            .zip(x)
            .map(|(lx, xi)| (lx - value * xi).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diagonal[i];
            for &(j, w) in &self.off_diagonal[i] {
                m[(i, j)] = w;
            }
        }
        m
    }
}
