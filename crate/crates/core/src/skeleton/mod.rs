//! Deterministic controlled skeleton equation, the entropy cost `L_T` and
//! the numerical probes of the level sets `S_N`.

mod entropy;
mod sampling;
mod solver;

pub use entropy::{entropy_density, entropy_lt};
pub use sampling::random_control_in_level_set;
pub use solver::{
    continuity_probe, skeleton_grid, solve_skeleton, solve_skeleton_on_grid, uniform_bound_check, BoundEntry,
    UniformBoundReport,
};
