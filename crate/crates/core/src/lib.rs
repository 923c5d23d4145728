//! Tail-index, extreme-quantile and endpoint estimation for Pareto-type
//! distributions that may be truncated at an unknown finite point.
//!
//! The crate is organised bottom-up:
//!
//! - [`sample`]: validated order statistics and the log-excess functionals
//! - [`estimators`]: the tail-index solver, the truncated-Pareto MLE and the
//!   truncation-odds estimate
//! - [`tailfit`]: quantile and endpoint estimators plus the Weissman and
//!   moment baselines
//! - [`diagnostics`]: Pareto / truncated-Pareto QQ-plots and `k*` selection
//! - [`models`]: the simulation families and their inverse-transform samplers
//! - [`montecarlo`]: the repeated-sampling study
//! - [`asymptotics`]: limiting bias and variance constants
//!
//! With the default `parallel` feature, Monte Carlo runs and `k*` sweeps are
//! spread over a rayon pool; results do not depend on the thread count.

// `!(x > 0.0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod diagnostics;
pub mod error;
pub mod estimators;
pub mod exec;
pub mod models;
pub mod montecarlo;
pub mod rng;
pub mod sample;
pub mod tailfit;

pub use error::{Error, InputError, Result};
pub use estimators::{AlphaFit, SolverConfig};
pub use exec::Execution;
pub use models::TailDistribution;
pub use sample::{Sample, TrimSpec};
pub use tailfit::{Endpoint, OddsChoice, TailModel};
