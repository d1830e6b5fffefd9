//! Probabilistic neural network classification with per-feature Cauchy
//! smoothing parameters, trained by a constrained portfolio of
//! metaheuristics.

pub mod chm;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod evaluation;
pub mod metaheuristics;
pub mod pnn;

pub use error::{Error, Result};
