use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use specchain::chain::{
    run_chain, run_ensemble_with, Algorithm, ChainConfig, Constraint, EnsembleMode,
    ENSEMBLE_CSV_HEADER, RECORD_CSV_HEADER,
};
use specchain::graph::{graph_to_json, load_graph, load_partition, make_grid, partition_to_json};
use specchain::metrics::{plan_metrics, speckmeans};
use specchain::{Error, Graph, Partition, Result};

/// Spectral recombination Markov chains for connected graph partitions.
#[derive(Debug, Parser)]
#[command(name = "specchain", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a square grid graph and its row-band partition.
    GenGrid {
        #[arg(long)]
        side: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        graph_out: PathBuf,
        #[arg(long)]
        assignment_out: PathBuf,
    },
    /// Run one chain and write its per-step records and final assignment.
    Run {
        #[command(flatten)]
        chain: ChainArgs,
        /// Per-step records CSV.
        #[arg(long)]
        records_out: PathBuf,
        /// Final assignment JSON.
        #[arg(long)]
        final_out: PathBuf,
    },
    /// Generate an ensemble of plans and an aggregate metrics CSV.
    Ensemble {
        #[command(flatten)]
        chain: ChainArgs,
        /// Number of plans.
        #[arg(long)]
        count: usize,
        /// independent (one chain per plan) or subsample (one long chain).
        #[arg(long, default_value = "independent", value_parser = parse_mode)]
        mode: EnsembleMode,
        #[arg(long)]
        out_dir: PathBuf,
        /// Worker threads for independent chains.
        #[arg(long, env = "SPECCHAIN_JOBS", default_value_t = 1)]
        jobs: usize,
    },
    /// Spectral k-means baseline (parts may be disconnected).
    Speckmeans {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print metrics of an assignment.
    Stats {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        assignment: PathBuf,
    },
}

#[derive(Debug, Args)]
struct ChainArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Initial assignment JSON.
    #[arg(long)]
    assignment: PathBuf,
    /// specrecom, balspecrecom or treerecom.
    #[arg(long, value_parser = parse_algorithm)]
    algorithm: Algorithm,
    /// Accepted steps per chain (per sample in subsample mode).
    #[arg(long)]
    steps: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Spanning-tree balance tolerance, also used by --popdev-constraint.
    #[arg(long, default_value_t = specchain::chain::DEFAULT_EPS)]
    eps: f64,
    /// Also require population deviation at most --eps at every step.
    #[arg(long)]
    popdev_constraint: bool,
    #[arg(long, default_value_t = specchain::chain::DEFAULT_MAX_ATTEMPTS)]
    max_attempts: usize,
}

fn parse_algorithm(s: &str) -> std::result::Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mode(s: &str) -> std::result::Result<EnsembleMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl ChainArgs {
    fn config(&self) -> ChainConfig {
        let mut config = ChainConfig::new(self.algorithm, self.steps, self.k, self.seed);
        config.eps = self.eps;
        config.max_attempts_per_step = self.max_attempts;
        if self.popdev_constraint {
            config.constraints.push(Constraint::PopDev);
        }
        config
    }
}

#[derive(Debug, Serialize)]
struct RunManifest<'a> {
    version: &'static str,
    command: &'static str,
    config: &'a ChainConfig,
    graph_path: String,
    graph_sha256: String,
    initial_assignment: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    ensemble: Option<EnsembleSettings>,
    outputs: Vec<String>,
    duration_seconds: f64,
}

#[derive(Debug, Serialize)]
struct EnsembleSettings {
    count: usize,
    mode: EnsembleMode,
    jobs: usize,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

/// Writes through a sibling temporary file and renames it into place.
fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidArgument(format!("not a file path: {}", path.display())))?;
    let mut tmp_name = name.to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    let wrap = |e: std::io::Error| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    };
    fs::write(&tmp, contents).map_err(wrap)?;
    fs::rename(&tmp, path).map_err(wrap)
}

struct Inputs {
    graph: Graph,
    graph_sha256: String,
    initial: Partition,
}

fn load_inputs(graph_path: &Path, assignment_path: &Path) -> Result<Inputs> {
    let document = read(graph_path)?;
    let graph = load_graph(&document)?;
    let initial = load_partition(&read(assignment_path)?, &graph)?;
    Ok(Inputs {
        graph_sha256: hex::encode(Sha256::digest(document.as_bytes())),
        graph,
        initial,
    })
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let line = serde_json::to_string(value).map_err(|e| Error::InvalidState(e.to_string()))?;
    println!("{line}");
    Ok(())
}

fn manifest_json(manifest: &RunManifest) -> Result<Vec<u8>> {
    let mut bytes =
        serde_json::to_vec_pretty(manifest).map_err(|e| Error::InvalidState(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::GenGrid {
            side,
            k,
            graph_out,
            assignment_out,
        } => {
            let (graph, bands) = make_grid(side, k)?;
            write_atomic(&graph_out, graph_to_json(&graph).as_bytes())?;
            write_atomic(&assignment_out, partition_to_json(&graph, &bands).as_bytes())?;
        }
        Command::Run {
            chain,
            records_out,
            final_out,
        } => {
            let started = Instant::now();
            let inputs = load_inputs(&chain.graph, &chain.assignment)?;
            let config = chain.config();
            let run = run_chain(&inputs.graph, &inputs.initial, &config)?;

            let mut csv = String::from(RECORD_CSV_HEADER);
            csv.push('\n');
            for record in &run.records {
                csv.push_str(&record.csv_row());
                csv.push('\n');
            }
            write_atomic(&records_out, csv.as_bytes())?;
            write_atomic(
                &final_out,
                partition_to_json(&inputs.graph, &run.final_partition).as_bytes(),
            )?;

            let mut manifest_path = final_out.clone().into_os_string();
            manifest_path.push(".manifest.json");
            let manifest = RunManifest {
                version: env!("CARGO_PKG_VERSION"),
                command: "run",
                config: &config,
                graph_path: chain.graph.display().to_string(),
                graph_sha256: inputs.graph_sha256,
                initial_assignment: chain.assignment.display().to_string(),
                ensemble: None,
                outputs: vec![
                    records_out.display().to_string(),
                    final_out.display().to_string(),
                ],
                duration_seconds: started.elapsed().as_secs_f64(),
            };
            write_atomic(Path::new(&manifest_path), &manifest_json(&manifest)?)?;

            let metrics = plan_metrics(&inputs.graph, &run.final_partition)?;
            print_json(&serde_json::json!({
                "cut_edges": metrics.cut_edges,
                "pop_dev": metrics.pop_dev,
            }))?;
        }
        Command::Ensemble {
            chain,
            count,
            mode,
            out_dir,
            jobs,
        } => {
            let started = Instant::now();
            if jobs == 0 {
                return Err(Error::InvalidArgument("--jobs must be positive".into()));
            }
            let inputs = load_inputs(&chain.graph, &chain.assignment)?;
            let config = chain.config();
            let plans_dir = out_dir.join("plans");
            fs::create_dir_all(&plans_dir)?;

            let width = count.saturating_sub(1).to_string().len().max(5);
            let mut csv = String::from(ENSEMBLE_CSV_HEADER);
            csv.push('\n');
            let mut outputs = Vec::with_capacity(count + 1);
            run_ensemble_with(
                &inputs.graph,
                &inputs.initial,
                &config,
                count,
                mode,
                jobs,
                |sample, _records| {
                    let path = plans_dir.join(format!("plan_{:0width$}.json", sample.plan_index));
                    write_atomic(
                        &path,
                        partition_to_json(&inputs.graph, &sample.partition).as_bytes(),
                    )?;
                    outputs.push(path.display().to_string());
                    csv.push_str(&sample.csv_row());
                    csv.push('\n');
                    Ok(())
                },
            )?;
            let csv_path = out_dir.join("ensemble.csv");
            write_atomic(&csv_path, csv.as_bytes())?;
            outputs.insert(0, csv_path.display().to_string());

            let manifest = RunManifest {
                version: env!("CARGO_PKG_VERSION"),
                command: "ensemble",
                config: &config,
                graph_path: chain.graph.display().to_string(),
                graph_sha256: inputs.graph_sha256,
                initial_assignment: chain.assignment.display().to_string(),
                ensemble: Some(EnsembleSettings { count, mode, jobs }),
                outputs,
                duration_seconds: started.elapsed().as_secs_f64(),
            };
            write_atomic(&out_dir.join("manifest.json"), &manifest_json(&manifest)?)?;
        }
        Command::Speckmeans { graph, k, seed, out } => {
            let graph = load_graph(&read(&graph)?)?;
            let partition = speckmeans(&graph, k, seed)?;
            write_atomic(&out, partition_to_json(&graph, &partition).as_bytes())?;
            print_json(&plan_metrics(&graph, &partition)?)?;
        }
        Command::Stats { graph, assignment } => {
            let graph = load_graph(&read(&graph)?)?;
            let partition = load_partition(&read(&assignment)?, &graph)?;
            print_json(&plan_metrics(&graph, &partition)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => {
            let _ = std::io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("specchain: {e}");
            if e.is_runtime() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
