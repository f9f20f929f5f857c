//! Connected k-partitions of vertex-weighted graphs by recombination Markov
//! chains whose split step is driven by Fiedler vectors.
//!
//! The [`proposals`] module holds the three recombination kernels (sign split,
//! balanced threshold sweep, and the spanning-tree baseline), [`chain`] runs
//! them under constraints, and [`metrics`] scores the resulting plans.

pub mod chain;
pub mod error;
pub mod graph;
pub mod metrics;
pub mod proposals;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{Graph, Partition};
