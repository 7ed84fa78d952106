//! Executable versions of the analytic toolkit: log-Sobolev inequality,
//! logarithmic difference estimates and the two nonlinear Gronwall bounds.

pub mod certify;
mod gronwall;
mod log_difference;
mod log_sobolev;

pub use gronwall::{
    cumulative_trapezoid, log_gronwall_bound, nonlinear_gronwall_bound, GronwallInputs, LogGronwallInputs,
};
pub use log_difference::{log_diff_pairing_bound, log_plus_weighted_bound};
pub use log_sobolev::{log_sobolev, log_sobolev_gap, log_sobolev_plus, log_sobolev_plus_gap, Bound};
