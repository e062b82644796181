//! Optimal interpolation and extrapolation designs for analytic functions
//! observed with noise.
//!
//! The crate builds Chebyshev designs with variance-driven frequency
//! allocation, estimates a derivative of the unknown function at a point of
//! the domain (possibly outside the observation window) through a Taylor
//! expansion fed by Lagrange-interpolated derivatives, and evaluates the
//! closed-form error bounds and sample sizes that certify the estimate.
//! A seeded Monte Carlo engine checks the probabilistic claims empirically.
//!
//! Module map:
//!
//! - [`designs`]: knots, allocation weights and observation frequencies.
//! - [`polybasis`]: Lagrange basis jets, Lebesgue and Markoff diagnostics.
//! - [`estimators`]: knot means, interpolation, Taylor and Hoel estimators.
//! - [`bounds`]: error bounds, Hoeffding and Tchebycheff sample sizes,
//!   budget inversion.
//! - [`mc`]: simulation of the observation model and coverage experiments.
//! - `cli` (feature `cli`): configuration parsing and report generation.

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod designs;
pub mod error;
pub mod estimators;
pub mod mc;
pub mod noise;
pub mod numeric;
pub mod polybasis;

#[cfg(feature = "cli")]
pub mod cli;

pub use error::{Error, Result};
