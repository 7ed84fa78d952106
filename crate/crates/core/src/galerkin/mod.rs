//! Galerkin truncation of the log-heat equation with Poisson jump noise,
//! integrated by jump-adapted exponential Euler.

mod config;
mod grid;
mod moments;
mod system;

pub use config::SdeConfig;
pub use grid::build_grid;
pub use moments::{moment_estimate, BlowUpRecord, Estimate, MomentReport, Z_95};
pub use system::{control_jumps, moment_horizon, Forcing, GalerkinSystem, BLOW_UP_NORM};
