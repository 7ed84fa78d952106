//! Numerical toolkit for the stochastic heat equation with logarithmic
//! nonlinearity `u log|u|` driven by multiplicative compensated Poisson noise
//! on an interval with Dirichlet boundary conditions.
//!
//! The numerical routines are generic over [`Real`] (`f32`/`f64`); the
//! `*64` aliases below fix the scalar to `f64`, which is what the ensemble
//! drivers and the command-line harness use.

// Negated comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod control;
pub mod error;
pub mod galerkin;
pub mod ldp;
pub mod lemmas;
pub mod noise;
pub mod rng;
pub mod scalar;
pub mod skeleton;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Domain64 = spectral::Domain<f64>;
pub type SpectralField64 = spectral::SpectralField<f64>;
pub type TrajectorySample64 = spectral::TrajectorySample<f64>;
pub type Control64 = control::Control<f64>;
pub type MarkSpace64 = noise::MarkSpace<f64>;
pub type NoiseCoefficient64 = noise::NoiseCoefficient<f64>;
pub type SdeConfig64 = galerkin::SdeConfig<f64>;
pub type GalerkinSystem64 = galerkin::GalerkinSystem<f64>;
pub type TargetFunctional64 = ldp::TargetFunctional<f64>;
