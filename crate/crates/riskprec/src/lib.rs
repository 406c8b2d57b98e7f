//! Estimators of quantile-based risk measures and the precision of those
//! estimators.
//!
//! The library estimates value-at-risk, expected shortfall, and exponential
//! spectral risk measures from the order statistics of a loss sample, and
//! quantifies how precise those estimates are by simulating the estimators'
//! own sampling distributions under known loss laws. A seeded, counter-mode
//! random-number scheme makes every experiment bit-reproducible across
//! reruns, thread counts, and grid orderings.
//!
//! Start from [`mc_engine::ExperimentConfig`] and [`mc_engine::run_experiment`]
//! for simulation studies, or [`estimators`] to evaluate the measures on a
//! sample you already have. The `examples/` directory has one runnable
//! example per capability; a thin `riskprec` binary wraps the same
//! operations for batch use.

// Frozen numeric references (quantile coefficients, golden test values)
// keep every digit they were computed with, even where fewer would parse
// to the same f64.
#![allow(clippy::excessive_precision)]

pub mod analytic;
pub mod distributions;
pub mod error;
pub mod estimators;
pub mod mc_engine;
pub mod quad;
pub mod rng;
pub mod reporting;
pub mod stats;

pub use error::{Error, Result};
