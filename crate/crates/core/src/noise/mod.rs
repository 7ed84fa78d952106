//! Discretized mark space, noise coefficient families and Poisson random
//! measure samplers.

mod coefficient;
mod marks;
mod prm;

pub use coefficient::{eta_eval, NoiseCoefficient, NoiseFamily};
pub use marks::{Atom, MarkSpace};
pub use prm::{sample_controlled_prm, sample_prm, JumpEvent, MAX_EXPECTED_EVENTS};
