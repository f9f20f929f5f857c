//! Acceptance criteria. Each criterion prints one `PASS`/`FAIL` line; the
//! test fails at the end if any criterion failed.

mod common;

use std::collections::HashMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use specchain::chain::{
    run_chain, run_ensemble, Algorithm, ChainConfig, Ensemble, EnsembleMode, RECORD_CSV_HEADER,
};
use specchain::graph::make_grid;
use specchain::proposals::{
    best_threshold_split, treerecom_step, uniform_spanning_tree, Rejection,
};
use specchain::rng::rng_from_seed;
use specchain::spectral::{fiedler, sign_split};
use specchain::{Graph, Partition};

const GRID_CHAINS: usize = 50;
const GRID_STEPS: usize = 400;
const GRID_SEED: u64 = 20_240_601;

struct Report {
    failures: Vec<usize>,
}

impl Report {
    fn record(&mut self, id: usize, pass: bool, detail: String) {
        println!(
            "criterion {id}: {} — {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
        if !pass {
            self.failures.push(id);
        }
    }
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 0 {
        (v[m - 1] + v[m]) / 2.0
    } else {
        v[m]
    }
}

fn chi_square_p(counts: &[usize], expected: f64) -> f64 {
    let stat: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    1.0 - ChiSquared::new((counts.len() - 1) as f64).unwrap().cdf(stat)
}

fn eigensolver_oracle(report: &mut Report) {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_gap: f64 = 0.0;
    let mut worst_residual: f64 = 0.0;
    for _ in 0..500 {
        let n = rng.random_range(2..=8);
        let g = common::random_graph(&mut rng, n, 0.4, (0.1, 10.0), |_| 1.0);
        let (values, _) = common::jacobi_eigen(&common::dense_laplacian(&g));
        let f = fiedler(&g, 1e-8).unwrap();
        let l = common::dense_laplacian(&g);
        worst_gap = worst_gap.max((f.lambda2 - values[1]).abs());
        worst_residual = worst_residual
            .max(f.residual)
            .max(common::dense_residual(&l, f.lambda2, &f.vector));
    }
    let seconds = started.elapsed().as_secs_f64();
    report.record(
        1,
        worst_gap <= 1e-8 && worst_residual <= 1e-8 && seconds <= 10.0,
        format!(
            "500 graphs n<=8: max |λ2 − oracle| {worst_gap:.2e}, max residual {worst_residual:.2e}, {seconds:.2}s"
        ),
    );
}

fn fiedler_side_connectivity(report: &mut Report) {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut disconnected = 0;
    for i in 0..1000 {
        let n = rng.random_range(2..=50);
        let chord = [0.0, 0.05, 0.2][i % 3];
        let g = common::random_graph(&mut rng, n, chord, (1.0, 2.0), |_| 1.0);
        let f = fiedler(&g, 1e-8).unwrap();
        let (nonneg, _) = sign_split(&f);
        if !common::induces_connected(&g, &nonneg) {
            disconnected += 1;
        }
    }
    let seconds = started.elapsed().as_secs_f64();
    report.record(
        2,
        disconnected == 0 && seconds <= 30.0,
        format!("1000 graphs n<=50: {disconnected} disconnected nonnegative sides, {seconds:.2}s"),
    );
}

fn sweep_oracle(report: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut mismatches = 0;
    let mut with_split = 0;
    for _ in 0..200 {
        let n = rng.random_range(2..=12);
        let g = common::random_graph(&mut rng, n, 0.25, (1.0, 2.0), |r| r.random_range(0.1..10.0));
        let f = fiedler(&g, 1e-8).unwrap();
        let (choice, _) = best_threshold_split(&g, &f);
        let expected = common::brute_force_sweep(&g, &f.vector);
        with_split += usize::from(expected.is_some());
        if choice.map(|c| (c.threshold, c.first)) != expected {
            mismatches += 1;
        }
    }
    report.record(
        3,
        mismatches == 0,
        format!("200 super-parts n<=12: {mismatches} mismatches ({with_split} with a connected split)"),
    );
}

struct GridRuns {
    spec: Ensemble,
    bal: Ensemble,
    tree: Ensemble,
    graph: Graph,
    bands: Partition,
}

fn grid_runs() -> GridRuns {
    let (graph, bands) = make_grid(56, 7).unwrap();
    let run = |algorithm| {
        let config = ChainConfig::new(algorithm, GRID_STEPS, 7, GRID_SEED);
        run_ensemble(&graph, &bands, &config, GRID_CHAINS, EnsembleMode::Independent).unwrap()
    };
    GridRuns {
        spec: run(Algorithm::SpecReCom),
        bal: run(Algorithm::BalSpecReCom),
        tree: run(Algorithm::TreeReCom),
        graph,
        bands,
    }
}

fn finals(ensemble: &Ensemble) -> (Vec<f64>, Vec<f64>) {
    ensemble
        .samples
        .iter()
        .map(|s| (s.cut_edges as f64, s.pop_dev))
        .unzip()
}

fn grid_compactness(report: &mut Report, runs: &GridRuns, seconds: f64) {
    let (spec, _) = finals(&runs.spec);
    let (bal, _) = finals(&runs.bal);
    let (tree, _) = finals(&runs.tree);
    let (ms, mb, mt) = (median(&spec), median(&bal), median(&tree));
    let all_connected = [&runs.spec, &runs.bal, &runs.tree].iter().all(|e| {
        e.samples
            .iter()
            .all(|s| runs.graph.is_connected_partition(&s.partition).unwrap())
    });
    report.record(
        4,
        ms < 336.0 && ms < mt && mb < 336.0 && all_connected && seconds <= 1800.0,
        format!(
            "median cut edges: specrecom {ms}, balspecrecom {mb}, treerecom {mt} (start 336); all final plans connected: {all_connected}; {seconds:.0}s"
        ),
    );
}

fn grid_balance(report: &mut Report, runs: &GridRuns) {
    let (_, spec) = finals(&runs.spec);
    let (_, bal) = finals(&runs.bal);
    let (_, tree) = finals(&runs.tree);
    let (ms, mb) = (median(&spec), median(&bal));
    let bal_perfect = bal.iter().filter(|&&d| d == 0.0).count();
    let tree_max = tree.iter().copied().fold(0.0, f64::max);
    report.record(
        5,
        mb <= 0.01 && bal_perfect >= 1 && ms > 0.05 && tree_max <= 0.01,
        format!(
            "median popDev: balspecrecom {mb:.4} ({bal_perfect}/{GRID_CHAINS} at 0.0), specrecom {ms:.4}; treerecom max {tree_max:.4}"
        ),
    );
}

fn tree_uniformity(report: &mut Report) {
    let c4 = Graph::from_edge_list(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
    let k4_pairs: Vec<_> = (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))).collect();
    let k4 = Graph::from_edge_list(4, &k4_pairs).unwrap();
    let mut rng = rng_from_seed(6);
    let mut details = Vec::new();
    let mut pass = true;
    for (name, g, trees) in [("C4", &c4, 4usize), ("K4", &k4, 16)] {
        let samples = 100_000;
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for _ in 0..samples {
            let tree = uniform_spanning_tree(g, &mut rng).unwrap();
            *counts.entry(tree.edge_indices(g)).or_default() += 1;
        }
        let observed: Vec<usize> = counts.values().copied().collect();
        let p = chi_square_p(&observed, samples as f64 / trees as f64);
        pass &= counts.len() == trees && p > 0.001;
        details.push(format!("{name}: {} trees, p={p:.4}", counts.len()));
    }
    report.record(6, pass, details.join("; "));
}

fn star_pathology(report: &mut Report) {
    let edges: Vec<_> = (1..=18).map(|l| (0, l)).collect();
    let star = Graph::from_edge_list(19, &edges).unwrap();
    let mut labels = vec![0; 19];
    labels[18] = 1;
    let p = Partition::from_assignment(&star, labels).unwrap();
    let mut rng = rng_from_seed(7);
    let rejected = (0..100)
        .filter(|_| {
            treerecom_step(&star, &p, 0.5, &mut rng).unwrap().rejection()
                == Some(Rejection::NoBalanceEdge)
        })
        .count();
    report.record(
        7,
        rejected == 100,
        format!("K1,18, k=2, eps=0.5: {rejected}/100 proposals rejected for lack of a balance edge"),
    );
}

fn records_csv(records: &[specchain::chain::EnsembleRecord]) -> Vec<u8> {
    let mut out = format!("{RECORD_CSV_HEADER}\n");
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out.into_bytes()
}

fn determinism(report: &mut Report, runs: &GridRuns) {
    let original = records_csv(&runs.spec.records[..GRID_STEPS]);
    let seed = runs.spec.samples[0].seed;
    let config = ChainConfig::new(Algorithm::SpecReCom, GRID_STEPS, 7, seed);
    let rerun = run_chain(&runs.graph, &runs.bands, &config).unwrap();
    let repeated = records_csv(&rerun.records);
    report.record(
        8,
        original == repeated && rerun.final_partition == runs.spec.samples[0].partition,
        format!(
            "first specrecom chain rerun: {} bytes, identical: {}",
            original.len(),
            original == repeated
        ),
    );
}

#[test]
fn acceptance() {
    let mut report = Report {
        failures: Vec::new(),
    };
    eigensolver_oracle(&mut report);
    fiedler_side_connectivity(&mut report);
    sweep_oracle(&mut report);
    let started = Instant::now();
    let runs = grid_runs();
    grid_compactness(&mut report, &runs, started.elapsed().as_secs_f64());
    grid_balance(&mut report, &runs);
    tree_uniformity(&mut report);
    star_pathology(&mut report);
    determinism(&mut report, &runs);
    assert!(
        report.failures.is_empty(),
        "failed criteria: {:?}",
        report.failures
    );
}
