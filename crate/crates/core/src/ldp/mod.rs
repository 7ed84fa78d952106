//! Rate-function estimation over piecewise-constant controls and Monte Carlo
//! diagnostics of the small-noise asymptotics.

mod monte_carlo;
mod rate;
mod target;

pub use monte_carlo::{ldp1_diagnostic, tail_probability, wilson_interval, Ldp1Row, TailRow, MIN_TAIL_PATHS};
pub use rate::{
    estimate_rate, RateEstimate, RateOptions, RateStatus, TraceEntry, PENALTY_GROWTH, PENALTY_ROUNDS,
};
pub use target::TargetFunctional;
