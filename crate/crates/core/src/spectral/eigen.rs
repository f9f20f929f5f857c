//! Smallest nontrivial eigenpairs of a connected graph's Laplacian.
//!
//! Small matrices go through a dense symmetric eigendecomposition. Larger
//! ones use block inverse subspace iteration on the complement of the
//! all-ones vector: each solve `L x = b` (with `b ⊥ 1`) is done exactly
//! through a Cholesky factor of the grounded Laplacian (one vertex's row and
//! column removed), stored in envelope form under a reverse Cuthill–McKee
//! ordering, followed by a Rayleigh–Ritz projection.

use std::collections::VecDeque;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Laplacian;
use crate::error::{Error, Result};

/// Dimension at or below which the dense path is used by default.
pub const DENSE_LIMIT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverStrategy {
    /// Dense up to [`DENSE_LIMIT`], iterative above.
    #[default]
    Auto,
    Dense,
    Iterative,
}

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
}

/// Eigenpairs 2..=count+1 of `lap` (the constant eigenvector is skipped),
/// ascending. The caller guarantees the underlying graph is connected and
/// `count < dim`.
pub(crate) fn lowest_nontrivial(
    lap: &Laplacian,
    count: usize,
    tol: f64,
    strategy: SolverStrategy,
) -> Result<Vec<Eigenpair>> {
    let n = lap.dim();
    debug_assert!(count >= 1 && count < n);
    let dense = match strategy {
        SolverStrategy::Dense => true,
        SolverStrategy::Iterative => false,
        SolverStrategy::Auto => n <= DENSE_LIMIT,
    };
    if dense {
        Ok(dense_lowest(lap, count))
    } else {
        subspace_iteration(lap, count, tol)
    }
}

fn dense_lowest(lap: &Laplacian, count: usize) -> Vec<Eigenpair> {
    let eig = SymmetricEigen::new(lap.to_dense());
    let mut order: Vec<usize> = (0..lap.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    order
        .into_iter()
        .skip(1)
        .take(count)
        .map(|i| Eigenpair {
            value: eig.eigenvalues[i],
            vector: eig.eigenvectors.column(i).iter().copied().collect(),
        })
        .collect()
}

fn subspace_iteration(lap: &Laplacian, count: usize, tol: f64) -> Result<Vec<Eigenpair>> {
    let n = lap.dim();
    let block = (count + count.max(4)).min(n - 1);
    let factor = GroundedCholesky::new(lap)?;
    // The final vectors are post-processed (sign, zero snapping), so converge
    // a little below the requested tolerance.
    let target = 0.1 * tol;
    let budget = 10 * n;

    let mut rng = ChaCha8Rng::seed_from_u64(0x9e37_79b9_7f4a_7c15 ^ n as u64);
    let mut basis: Vec<Vec<f64>> = (0..block)
        .map(|_| (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect();
    orthonormalize(&mut basis, &mut rng);

    let mut worst = f64::INFINITY;
    for _ in 0..budget {
        for column in basis.iter_mut() {
            *column = factor.solve(column);
        }
        orthonormalize(&mut basis, &mut rng);

        let images: Vec<Vec<f64>> = basis
            .iter()
            .map(|q| {
                let mut y = vec![0.0; n];
                lap.apply(q, &mut y);
                y
            })
            .collect();
        let projected = DMatrix::from_fn(block, block, |i, j| dot(&basis[i], &images[j]));
        let projected = (&projected + projected.transpose()) * 0.5;
        let eig = SymmetricEigen::new(projected);
        let mut order: Vec<usize> = (0..block).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

        let rotate = |source: &[Vec<f64>], col: usize| -> Vec<f64> {
            let mut out = vec![0.0; n];
            for (r, s) in source.iter().enumerate() {
                let c = eig.eigenvectors[(r, col)];
                for (o, x) in out.iter_mut().zip(s) {
                    *o += c * x;
                }
            }
            out
        };
        let ritz: Vec<Vec<f64>> = order.iter().map(|&c| rotate(&basis, c)).collect();
        let ritz_images: Vec<Vec<f64>> = order.iter().map(|&c| rotate(&images, c)).collect();
        let values: Vec<f64> = order.iter().map(|&c| eig.eigenvalues[c]).collect();

        worst = (0..count)
            .map(|i| {
                ritz_images[i]
                    .iter()
                    .zip(&ritz[i])
                    .map(|(lx, x)| (lx - values[i] * x).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        basis = ritz;
        if worst <= target {
            return Ok(basis
                .into_iter()
                .zip(values)
                .take(count)
                .map(|(vector, value)| Eigenpair { value, vector })
                .collect());
        }
    }
    Err(Error::Solver {
        iterations: budget,
        residual: worst,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn remove_mean(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    for v in x.iter_mut() {
        *v -= mean;
    }
}

/// Modified Gram–Schmidt (two passes) within the complement of the all-ones
/// vector. Columns that collapse are replaced with fresh random directions.
fn orthonormalize(basis: &mut [Vec<f64>], rng: &mut ChaCha8Rng) {
    for i in 0..basis.len() {
        let mut attempts = 0;
        loop {
            let (done, rest) = basis.split_at_mut(i);
            let column = &mut rest[0];
            let before = column.iter().map(|x| x * x).sum::<f64>().sqrt();
            for _ in 0..2 {
                remove_mean(column);
                for q in done.iter() {
                    let c = dot(q, column);
                    for (x, qi) in column.iter_mut().zip(q) {
                        *x -= c * qi;
                    }
                }
            }
            let norm = column.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-10 * before && norm > 0.0 {
                for x in column.iter_mut() {
                    *x /= norm;
                }
                break;
            }
            attempts += 1;
            assert!(attempts < 100, "cannot extend orthonormal basis");
            for x in column.iter_mut() {
                *x = rng.random_range(-1.0..1.0);
            }
        }
    }
}

/// Cholesky factor of the Laplacian with one vertex grounded, in envelope
/// (skyline) storage under reverse Cuthill–McKee order.
struct GroundedCholesky {
    /// Factor row `i` corresponds to vertex `order[i]`.
    order: Vec<usize>,
    ground: usize,
    first: Vec<usize>,
    row_start: Vec<usize>,
    values: Vec<f64>,
}

impl GroundedCholesky {
    fn new(lap: &Laplacian) -> Result<Self> {
        let n = lap.dim();
        let mut order = reverse_cuthill_mckee(lap);
        let ground = order.pop().expect("nonempty ordering");
        let m = n - 1;
        let mut position = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }

        let mut first = Vec::with_capacity(m);
        let mut row_start = Vec::with_capacity(m + 1);
        let mut len = 0;
        for (i, &v) in order.iter().enumerate() {
            let lo = lap
                .row(v)
                .iter()
                .map(|&(w, _)| position[w])
                .filter(|&p| p < i)
                .min()
                .unwrap_or(i);
            first.push(lo);
            row_start.push(len);
            len += i - lo + 1;
        }
        row_start.push(len);

        let mut values = vec![0.0; len];
        for (i, &v) in order.iter().enumerate() {
            values[row_start[i] + i - first[i]] = lap.diagonal()[v];
            for &(w, a) in lap.row(v) {
                let p = position[w];
                if p < i {
                    values[row_start[i] + p - first[i]] = a;
                }
            }
        }

        for i in 0..m {
            let fi = first[i];
            let ri = row_start[i];
            for j in fi..i {
                let fj = first[j];
                let rj = row_start[j];
                let lo = fi.max(fj);
                let s: f64 = dot(
                    &values[ri + lo - fi..ri + j - fi],
                    &values[rj + lo - fj..rj + j - fj],
                );
                let diag_j = values[rj + j - fj];
                values[ri + j - fi] = (values[ri + j - fi] - s) / diag_j;
            }
            let row = &values[ri..ri + i - fi];
            let d = values[ri + i - fi] - dot(row, row);
            if !(d > 0.0) {
                return Err(Error::Precondition(
                    "grounded Laplacian is not positive definite (graph disconnected?)".into(),
                ));
            }
            values[ri + i - fi] = d.sqrt();
        }

        Ok(Self {
            order,
            ground,
            first,
            row_start,
            values,
        })
    }

    /// Mean-zero solution of `L x = b`, for `b` orthogonal to the all-ones vector.
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let m = self.order.len();
        let mut y: Vec<f64> = self.order.iter().map(|&v| b[v]).collect();
        for i in 0..m {
            let (fi, ri) = (self.first[i], self.row_start[i]);
            let s = dot(&self.values[ri..ri + i - fi], &y[fi..i]);
            y[i] = (y[i] - s) / self.values[ri + i - fi];
        }
        for i in (0..m).rev() {
            let (fi, ri) = (self.first[i], self.row_start[i]);
            y[i] /= self.values[ri + i - fi];
            let xi = y[i];
            for (yk, l) in y[fi..i].iter_mut().zip(&self.values[ri..ri + i - fi]) {
                *yk -= l * xi;
            }
        }
        let mut x = vec![0.0; m + 1];
        for (&v, &value) in self.order.iter().zip(&y) {
            x[v] = value;
        }
        x[self.ground] = 0.0;
        remove_mean(&mut x);
        x
    }
}

/// Reverse Cuthill–McKee ordering of the Laplacian's sparsity graph,
/// starting each component from a pseudo-peripheral vertex.
fn reverse_cuthill_mckee(lap: &Laplacian) -> Vec<usize> {
    let n = lap.dim();
    let degree = |v: usize| lap.row(v).len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);

    while order.len() < n {
        let seed = (0..n)
            .filter(|&v| !visited[v])
            .min_by_key(|&v| (degree(v), v))
            .expect("unvisited vertex");
        let start = pseudo_peripheral(lap, seed);
        let begin = order.len();
        visited[start] = true;
        order.push(start);
        let mut head = begin;
        while head < order.len() {
            let u = order[head];
            head += 1;
            let mut next: Vec<usize> = lap
                .row(u)
                .iter()
                .map(|&(w, _)| w)
                .filter(|&w| !visited[w])
                .collect();
            next.sort_by_key(|&w| (degree(w), w));
            for w in next {
                visited[w] = true;
                order.push(w);
            }
        }
    }
    order.reverse();
    order
}

fn pseudo_peripheral(lap: &Laplacian, seed: usize) -> usize {
    let mut current = seed;
    let (mut ecc, mut last) = bfs_levels(lap, current);
    for _ in 0..8 {
        let candidate = *last
            .iter()
            .min_by_key(|&&v| (lap.row(v).len(), v))
            .expect("last level nonempty");
        let (e, l) = bfs_levels(lap, candidate);
        if e <= ecc {
            break;
        }
        current = candidate;
        ecc = e;
        last = l;
    }
    current
}

/// Eccentricity of `start` within its component and the vertices of the
/// last BFS level.
fn bfs_levels(lap: &Laplacian, start: usize) -> (usize, Vec<usize>) {
    let mut level = vec![usize::MAX; lap.dim()];
    level[start] = 0;
    let mut queue = VecDeque::from([start]);
    let mut max_level = 0;
    while let Some(u) = queue.pop_front() {
        max_level = max_level.max(level[u]);
        for &(w, _) in lap.row(u) {
            if level[w] == usize::MAX {
                level[w] = level[u] + 1;
                queue.push_back(w);
            }
        }
    }
    let last = (0..lap.dim()).filter(|&v| level[v] == max_level).collect();
    (max_level, last)
}
