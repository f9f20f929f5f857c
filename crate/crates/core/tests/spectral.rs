mod common;

use common::{dense_laplacian, dense_residual, jacobi_eigen, random_graph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use specchain::graph::{Edge, Vertex};
use specchain::spectral::{
    fiedler, fiedler_with, sign_split, spectral_embedding, threshold_split, SolverOptions,
    SolverStrategy,
};
use specchain::{Error, Graph};

fn weighted(n: usize, edges: &[(usize, usize, f64)]) -> Graph {
    let vertices = (0..n)
        .map(|i| Vertex {
            id: i.to_string(),
            weight: 1.0,
        })
        .collect();
    let edges = edges
        .iter()
        .map(|&(u, v, weight)| Edge { u, v, weight })
        .collect();
    Graph::new(vertices, edges).unwrap()
}

#[test]
fn three_vertex_path() {
    let g = Graph::from_edge_list(3, &[(0, 1), (1, 2)]).unwrap();
    let f = fiedler(&g, 1e-10).unwrap();
    assert!((f.lambda2 - 1.0).abs() < 1e-12);
    let s = 0.5f64.sqrt();
    // Entries 0 and 2 tie in magnitude; the lower index is made positive.
    for (x, e) in f.vector.iter().zip([s, 0.0, -s]) {
        assert!((x - e).abs() < 1e-10, "{:?}", f.vector);
    }
    assert_eq!(sign_split(&f), (vec![0, 1], vec![2]));
}

#[test]
fn complete_graph_k4() {
    let pairs: Vec<_> = (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))).collect();
    let g = Graph::from_edge_list(4, &pairs).unwrap();
    let f = fiedler(&g, 1e-10).unwrap();
    assert!((f.lambda2 - 4.0).abs() < 1e-12);
    assert!(f.residual <= 1e-10);
}

#[test]
fn single_weighted_edge() {
    for w in [0.5, 1.0, 3.25] {
        let f = fiedler(&weighted(2, &[(0, 1, w)]), 1e-10).unwrap();
        assert!((f.lambda2 - 2.0 * w).abs() < 1e-12);
        assert!(f.vector[0] > 0.0 && f.vector[1] < 0.0);
    }
}

#[test]
fn preconditions() {
    let single = Graph::from_edge_list(1, &[]).unwrap();
    assert!(matches!(fiedler(&single, 1e-8), Err(Error::Precondition(_))));
    let split = Graph::from_edge_list(4, &[(0, 1), (2, 3)]).unwrap();
    assert!(matches!(fiedler(&split, 1e-8), Err(Error::Precondition(_))));
    for strategy in [SolverStrategy::Dense, SolverStrategy::Iterative] {
        let options = SolverOptions {
            strategy,
            ..SolverOptions::default()
        };
        assert!(matches!(
            fiedler_with(&split, options),
            Err(Error::Precondition(_))
        ));
    }
}

#[test]
fn both_strategies_match_the_jacobi_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for trial in 0..60 {
        let n = 3 + trial % 40;
        let g = random_graph(&mut rng, n, 0.1, (0.5, 3.0), |_| 1.0);
        let l = dense_laplacian(&g);
        let (values, _) = jacobi_eigen(&l);
        for strategy in [SolverStrategy::Dense, SolverStrategy::Iterative] {
            let options = SolverOptions {
                tol: 1e-9,
                strategy,
            };
            let f = fiedler_with(&g, options).unwrap();
            assert!(
                (f.lambda2 - values[1]).abs() <= 1e-8 * values[1].max(1.0),
                "n={n} {strategy:?}: {} vs {}",
                f.lambda2,
                values[1]
            );
            assert!(dense_residual(&l, f.lambda2, &f.vector) <= 1e-8);
            let norm: f64 = f.vector.iter().map(|x| x * x).sum();
            assert!((norm - 1.0).abs() < 1e-10);
            assert!(f.vector.iter().sum::<f64>().abs() < 1e-8);
        }
    }
}

#[test]
fn large_graphs_use_the_iterative_path() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in [120, 200] {
        let g = random_graph(&mut rng, n, 3.0 / n as f64, (1.0, 2.0), |_| 1.0);
        let f = fiedler(&g, 1e-8).unwrap();
        let l = dense_laplacian(&g);
        assert!(dense_residual(&l, f.lambda2, &f.vector) <= 1e-8);
        let (values, _) = jacobi_eigen(&l);
        assert!((f.lambda2 - values[1]).abs() <= 1e-8 * values[1].max(1.0));
    }
}

#[test]
fn scaling_weights_scales_lambda_and_keeps_split() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let g = random_graph(&mut rng, 12, 0.3, (1.0, 2.0), |_| 1.0);
        let mut scaled = g.clone();
        let weights: Vec<f64> = g.edges().iter().map(|e| e.weight * 3.5).collect();
        scaled.set_edge_weights(&weights).unwrap();
        let (a, b) = (fiedler(&g, 1e-10).unwrap(), fiedler(&scaled, 1e-10).unwrap());
        assert!((b.lambda2 - 3.5 * a.lambda2).abs() < 1e-9 * b.lambda2);
        // Scale-invariant up to the degenerate-eigenspace case, which random
        // real weights avoid almost surely.
        assert_eq!(sign_split(&a), sign_split(&b));
    }
}

#[test]
fn threshold_sides_are_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let g = random_graph(&mut rng, 30, 0.15, (1.0, 2.0), |_| 1.0);
    let f = fiedler(&g, 1e-10).unwrap();
    let mut thresholds = f.vector.clone();
    thresholds.sort_by(f64::total_cmp);
    let mut previous = usize::MAX;
    for t in thresholds {
        let (high, low) = threshold_split(&f, t);
        assert_eq!(high.len() + low.len(), 30);
        assert!(high.len() <= previous);
        previous = high.len();
    }
}

#[test]
fn embedding_columns_are_orthonormal_eigenvectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in [10, 90] {
        let g = random_graph(&mut rng, n, 4.0 / n as f64, (1.0, 2.0), |_| 1.0);
        let k = 4;
        let rows = spectral_embedding(&g, k, 1e-9).unwrap();
        assert_eq!(rows.len(), n);
        let l = dense_laplacian(&g);
        let (values, _) = jacobi_eigen(&l);
        for c in 0..k - 1 {
            let col: Vec<f64> = rows.iter().map(|r| r[c]).collect();
            let norm: f64 = col.iter().map(|x| x * x).sum();
            assert!((norm - 1.0).abs() < 1e-9);
            assert!(col.iter().sum::<f64>().abs() < 1e-8);
            let lambda: f64 = (0..n)
                .map(|i| col[i] * l[i].iter().zip(&col).map(|(a, b)| a * b).sum::<f64>())
                .sum();
            assert!((lambda - values[c + 1]).abs() < 1e-7 * values[c + 1].max(1.0));
            for d in 0..c {
                let dot: f64 = rows.iter().map(|r| r[c] * r[d]).sum();
                assert!(dot.abs() < 1e-8);
            }
        }
    }
}
