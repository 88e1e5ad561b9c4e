//! Pearle's local hidden-variable model for the singlet correlations.
//!
//! A pair of particles shares a spin direction `u` uniform on S² and a
//! detection threshold `s`. Each particle is detected only when its spin is
//! close enough to the measurement axis, and the correlation computed on
//! detected pairs reproduces `-a·b`. The price is a coincidence rate that
//! depends on the angle between the settings, between `4/3·(1-2/π)` and `2/3`.
//!
//! - [`model`]: hidden state, sampling, and the measurement rule.
//! - [`estimators`]: seeded angle sweeps of correlation and coincidence rate.
//! - [`density`]: closed-form laws of the amplitude and threshold, Riemann
//!   bounds, and a KS harness.
//! - [`appendix`]: the grid operator producing candidate threshold densities
//!   from a generating function μ.

pub mod appendix;
pub mod density;
pub mod error;
pub mod estimators;
pub mod model;
pub mod rng;
pub mod vector;

pub use appendix::{Grid, GridFunction, MuSpec, Positivity};
pub use density::{DensityCurve, RiemannBounds};
pub use error::{Error, Result};
pub use estimators::{
    AngleRecord, Convention, CorrelationEstimate, FixedSecond, SweepConfig, SweepResult, Tally,
};
pub use model::{DetectionThreshold, HiddenPairState, Outcome, PairResult};
pub use vector::UnitVector3;
