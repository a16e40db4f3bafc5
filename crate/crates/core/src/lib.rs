//! Cluster counts of critical site percolation on the triangular lattice:
//! lattice domains, sampling, per-sample observables, Monte Carlo campaigns,
//! the scaling-limit formulas, and fits against them.

pub mod analysis;
pub mod cft;
pub mod error;
pub mod estimators;
pub mod lattice;
pub mod oracle;
pub mod percolation;
pub mod rng;

pub use error::{Error, Result};
