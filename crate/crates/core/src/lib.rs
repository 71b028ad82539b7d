//! # currlab
//!
//! A simulation laboratory for curriculum learning on multitask linear
//! regression. The crate bundles
//!
//! - dense numerics (Jacobi eigensolver, pivoted-QR / SVD least squares,
//!   counter-based random streams),
//! - synthetic problem generators (random tasks, identical-source
//!   instances, hard diversity instances for low-rank models),
//! - estimators (OLS, ball projection, source selection, the two-phase
//!   low-rank estimator and its confidence sets),
//! - task schedulers (uniform, oracle fixed task, source selection,
//!   optimistic diversity scheduler, prediction-gain scheduler),
//! - an SGD engine with the three-term prediction-gain decomposition,
//! - ground-truth metrics and Monte Carlo risk estimation, and
//! - an experiment harness driven by flat JSON configs.
//!
//! Each capability has a runnable program under `examples/`:
//!
//! ```bash
//! cargo run --release --example reproduce_experiment
//! cargo run --release --example ofu_diversity
//! ```
//!
//! The `currlab` binary exposes the harness (`run`, `reproduce-paper`,
//! `calibrate-alpha`, `sweep`).

pub mod error;
pub mod estimators;
pub mod harness;
pub mod metrics;
pub mod numerics;
pub mod problems;
pub mod schedulers;
pub mod sgd;

pub use error::{Error, Result};
pub use numerics::{Matrix, RngStream, SymmetricEigen};
pub use problems::{AnyProblem, Problem, SampleBatch, StructuredProblem, TaskSpec};
