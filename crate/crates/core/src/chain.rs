//! The constrained Markov chain driver and ensemble generation.
//!
//! Each step repeatedly draws a proposal until one yields a state that
//! satisfies every configured constraint; rejected proposals and constraint
//! failures both count as attempts of the same step. Only accepted
//! transitions advance the step counter.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Partition};
use crate::metrics::{cut_edges, pop_dev};
use crate::proposals::{
    balspecrecom_step_with, specrecom_step_with, treerecom_step, KernelOptions, Outcome,
};
use crate::rng::{mix_seed, rng_from_seed, ChainRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    SpecReCom,
    BalSpecReCom,
    TreeReCom,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::SpecReCom,
        Algorithm::BalSpecReCom,
        Algorithm::TreeReCom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::SpecReCom => "specrecom",
            Algorithm::BalSpecReCom => "balspecrecom",
            Algorithm::TreeReCom => "treerecom",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown algorithm \"{s}\" (expected specrecom, balspecrecom or treerecom)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Constraint {
    /// Every part induces a connected subgraph.
    Connectivity,
    /// Population deviation at most the configured `eps`.
    PopDev,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Constraint::Connectivity => "connectivity",
            Constraint::PopDev => "popdev",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainConfig {
    pub algorithm: Algorithm,
    pub steps: usize,
    pub k: usize,
    pub master_seed: u64,
    /// Balance tolerance for spanning-tree splits and the optional
    /// population constraint.
    pub eps: f64,
    pub constraints: Vec<Constraint>,
    pub max_attempts_per_step: usize,
    #[serde(skip)]
    pub kernel: KernelOptions,
}

pub const DEFAULT_EPS: f64 = 0.01;
pub const DEFAULT_MAX_ATTEMPTS: usize = 1000;

impl ChainConfig {
    /// Connectivity-only configuration with default tolerance and attempt cap.
    pub fn new(algorithm: Algorithm, steps: usize, k: usize, master_seed: u64) -> Self {
        Self {
            algorithm,
            steps,
            k,
            master_seed,
            eps: DEFAULT_EPS,
            constraints: vec![Constraint::Connectivity],
            max_attempts_per_step: DEFAULT_MAX_ATTEMPTS,
            kernel: KernelOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.constraints.contains(&Constraint::Connectivity) {
            return Err(Error::InvalidArgument(
                "the connectivity constraint is mandatory".into(),
            ));
        }
        if self.k == 0 {
            return Err(Error::InvalidArgument("k must be positive".into()));
        }
        if !(self.eps.is_finite() && self.eps >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "eps must be a nonnegative number, got {}",
                self.eps
            )));
        }
        if self.max_attempts_per_step == 0 {
            return Err(Error::InvalidArgument(
                "max_attempts_per_step must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Metrics of the state after one accepted step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleRecord {
    pub chain_id: usize,
    pub step_index: usize,
    pub cut_edge_count: usize,
    pub pop_dev: f64,
    pub seed_used: u64,
    pub attempts_used: usize,
}

pub const RECORD_CSV_HEADER: &str = "chain_id,step_index,cut_edges,pop_dev,seed,attempts";

impl EnsembleRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.chain_id,
            self.step_index,
            self.cut_edge_count,
            self.pop_dev,
            self.seed_used,
            self.attempts_used
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    Pass,
    Fail(Constraint),
}

/// Evaluates the configured constraints in order; reports the first failure.
pub fn check_constraints(graph: &Graph, partition: &Partition, config: &ChainConfig) -> Feasibility {
    for &constraint in &config.constraints {
        let ok = match constraint {
            Constraint::Connectivity => graph.is_connected_partition(partition).unwrap_or(false),
            Constraint::PopDev => {
                pop_dev(graph, partition).is_ok_and(|d| d <= config.eps)
            }
        };
        if !ok {
            return Feasibility::Fail(constraint);
        }
    }
    Feasibility::Pass
}

/// A running chain: owns its state and random stream, shares the graph.
pub struct Chain<'g> {
    graph: &'g Graph,
    config: ChainConfig,
    state: Partition,
    rng: ChainRng,
    chain_id: usize,
    seed: u64,
    steps_taken: usize,
}

impl<'g> Chain<'g> {
    pub fn new(
        graph: &'g Graph,
        initial: Partition,
        config: ChainConfig,
        chain_id: usize,
        seed: u64,
    ) -> Result<Self> {
        config.validate()?;
        if initial.vertex_count() != graph.vertex_count() {
            return Err(Error::Precondition(format!(
                "initial partition covers {} vertices, graph has {}",
                initial.vertex_count(),
                graph.vertex_count()
            )));
        }
        if initial.k() != config.k {
            return Err(Error::Precondition(format!(
                "initial partition has {} parts, configuration expects {}",
                initial.k(),
                config.k
            )));
        }
        pop_dev(graph, &initial)?;
        if let Feasibility::Fail(c) = check_constraints(graph, &initial, &config) {
            return Err(Error::Precondition(format!(
                "initial partition violates the {c} constraint"
            )));
        }
        Ok(Self {
            graph,
            config,
            state: initial,
            rng: rng_from_seed(seed),
            chain_id,
            seed,
            steps_taken: 0,
        })
    }

    pub fn state(&self) -> &Partition {
        &self.state
    }

    pub fn into_state(self) -> Partition {
        self.state
    }

    pub fn steps_taken(&self) -> usize {
        self.steps_taken
    }

    /// Advances by one accepted transition.
    pub fn step(&mut self) -> Result<EnsembleRecord> {
        let step_index = self.steps_taken + 1;
        let mut last_reason = String::from("none");
        for attempt in 1..=self.config.max_attempts_per_step {
            let proposal = match self.config.algorithm {
                Algorithm::SpecReCom => specrecom_step_with(
                    self.graph,
                    &self.state,
                    &mut self.rng,
                    &self.config.kernel,
                )?,
                Algorithm::BalSpecReCom => balspecrecom_step_with(
                    self.graph,
                    &self.state,
                    &mut self.rng,
                    &self.config.kernel,
                )?,
                Algorithm::TreeReCom => {
                    treerecom_step(self.graph, &self.state, self.config.eps, &mut self.rng)?
                }
            };
            if let Outcome::Rejected(reason) = proposal.outcome {
                last_reason = reason.to_string();
                continue;
            }
            let candidate = proposal.apply(self.graph, &self.state)?;
            match check_constraints(self.graph, &candidate, &self.config) {
                Feasibility::Pass => {
                    self.state = candidate;
                    self.steps_taken = step_index;
                    return Ok(EnsembleRecord {
                        chain_id: self.chain_id,
                        step_index,
                        cut_edge_count: cut_edges(self.graph, &self.state),
                        pop_dev: pop_dev(self.graph, &self.state)?,
                        seed_used: self.seed,
                        attempts_used: attempt,
                    });
                }
                Feasibility::Fail(c) => last_reason = format!("{c} constraint"),
            }
        }
        Err(Error::StuckChain {
            step: step_index,
            attempts: self.config.max_attempts_per_step,
            reason: last_reason,
        })
    }
}

#[derive(Debug, Clone)]
pub struct ChainRun {
    pub final_partition: Partition,
    pub records: Vec<EnsembleRecord>,
}

/// Runs `config.steps` accepted steps from `initial` with the master seed.
pub fn run_chain(graph: &Graph, initial: &Partition, config: &ChainConfig) -> Result<ChainRun> {
    let mut chain = Chain::new(graph, initial.clone(), config.clone(), 0, config.master_seed)?;
    let records = (0..config.steps)
        .map(|_| chain.step())
        .collect::<Result<Vec<_>>>()?;
    Ok(ChainRun {
        final_partition: chain.into_state(),
        records,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EnsembleMode {
    /// `m` chains of `N` steps with seeds derived from the master seed.
    Independent,
    /// One chain of `m·N` steps, sampled every `N` steps.
    Subsample,
}

impl FromStr for EnsembleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "independent" => Ok(EnsembleMode::Independent),
            "subsample" => Ok(EnsembleMode::Subsample),
            _ => Err(Error::InvalidArgument(format!(
                "unknown ensemble mode \"{s}\" (expected independent or subsample)"
            ))),
        }
    }
}

/// One plan of an ensemble.
#[derive(Debug, Clone)]
pub struct EnsembleSample {
    pub plan_index: usize,
    pub partition: Partition,
    pub cut_edges: usize,
    pub pop_dev: f64,
    pub seed: u64,
    /// Proposal attempts spent producing this plan.
    pub attempts_total: usize,
}

pub const ENSEMBLE_CSV_HEADER: &str = "plan_index,cut_edges,pop_dev,seed,attempts_total";

impl EnsembleSample {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.plan_index, self.cut_edges, self.pop_dev, self.seed, self.attempts_total
        )
    }
}

#[derive(Debug, Clone)]
pub struct Ensemble {
    pub samples: Vec<EnsembleSample>,
    pub records: Vec<EnsembleRecord>,
}

/// Collects an ensemble of `count` plans on the current thread.
pub fn run_ensemble(
    graph: &Graph,
    initial: &Partition,
    config: &ChainConfig,
    count: usize,
    mode: EnsembleMode,
) -> Result<Ensemble> {
    let mut samples = Vec::with_capacity(count);
    let mut records = Vec::new();
    run_ensemble_with(graph, initial, config, count, mode, 1, |sample, recs| {
        samples.push(sample);
        records.extend(recs);
        Ok(())
    })?;
    Ok(Ensemble { samples, records })
}

/// Generates `count` plans and hands each, with the step records that led to
/// it, to `sink` in plan order. Independent chains run in batches of `jobs`
/// worker threads; output order does not depend on `jobs`.
pub fn run_ensemble_with<F>(
    graph: &Graph,
    initial: &Partition,
    config: &ChainConfig,
    count: usize,
    mode: EnsembleMode,
    jobs: usize,
    mut sink: F,
) -> Result<()>
where
    F: FnMut(EnsembleSample, Vec<EnsembleRecord>) -> Result<()>,
{
    if count == 0 {
        return Err(Error::InvalidArgument("ensemble size must be positive".into()));
    }
    match mode {
        EnsembleMode::Independent => {
            let jobs = jobs.max(1);
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| Error::InvalidState(format!("cannot start workers: {e}")))?;
            let run_one = |index: usize| -> Result<(EnsembleSample, Vec<EnsembleRecord>)> {
                let seed = mix_seed(config.master_seed, index as u64);
                let tag = |e: Error| Error::Ensemble {
                    index,
                    source: Box::new(e),
                };
                let mut chain =
                    Chain::new(graph, initial.clone(), config.clone(), index, seed).map_err(tag)?;
                let records = (0..config.steps)
                    .map(|_| chain.step())
                    .collect::<Result<Vec<_>>>()
                    .map_err(tag)?;
                let partition = chain.into_state();
                let sample = EnsembleSample {
                    plan_index: index,
                    cut_edges: cut_edges(graph, &partition),
                    pop_dev: pop_dev(graph, &partition).map_err(tag)?,
                    partition,
                    seed,
                    attempts_total: records.iter().map(|r| r.attempts_used).sum(),
                };
                Ok((sample, records))
            };
            let batch = jobs * 4;
            for start in (0..count).step_by(batch) {
                let end = (start + batch).min(count);
                let results: Vec<_> =
                    pool.install(|| (start..end).into_par_iter().map(run_one).collect());
                for result in results {
                    let (sample, records) = result?;
                    sink(sample, records)?;
                }
            }
        }
        EnsembleMode::Subsample => {
            let seed = config.master_seed;
            let mut chain = Chain::new(graph, initial.clone(), config.clone(), 0, seed)?;
            for index in 0..count {
                let tag = |e: Error| Error::Ensemble {
                    index,
                    source: Box::new(e),
                };
                let records = (0..config.steps)
                    .map(|_| chain.step())
                    .collect::<Result<Vec<_>>>()
                    .map_err(tag)?;
                let partition = chain.state().clone();
                let sample = EnsembleSample {
                    plan_index: index,
                    cut_edges: cut_edges(graph, &partition),
                    pop_dev: pop_dev(graph, &partition).map_err(tag)?,
                    partition,
                    seed,
                    attempts_total: records.iter().map(|r| r.attempts_used).sum(),
                };
                sink(sample, records)?;
            }
        }
    }
    Ok(())
}
