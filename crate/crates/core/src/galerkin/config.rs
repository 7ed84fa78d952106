use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::{MarkSpace, NoiseCoefficient};
use crate::scalar::Real;
use crate::spectral::{Domain, SpectralField};

/// Everything needed to integrate the Galerkin system at level `level`.
///
/// `epsilon = None` integrates the unscaled equation (jump intensity `m`,
/// jump size `η`); `Some(ε)` integrates the small-noise family with jump
/// intensity `m/ε` and jump size `ε η`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdeConfig<T> {
    pub domain: Domain<T>,
    pub level: usize,
    pub horizon: T,
    pub max_step: T,
    pub u0: SpectralField<T>,
    pub epsilon: Option<T>,
    pub noise: NoiseCoefficient<T>,
    pub marks: MarkSpace<T>,
    /// Include `Δu` in the drift.
    pub laplacian: bool,
    /// Include `P_n[u log|u|]` in the drift.
    pub log_term: bool,
}

impl<T: Real> SdeConfig<T> {
    /// Unit interval, all drift terms on, unscaled noise.
    pub fn new(
        level: usize,
        horizon: T,
        max_step: T,
        u0: SpectralField<T>,
        noise: NoiseCoefficient<T>,
        marks: MarkSpace<T>,
    ) -> Self {
        Self {
            domain: Domain::unit(),
            level,
            horizon,
            max_step,
            u0,
            epsilon: None,
            noise,
            marks,
            laplacian: true,
            log_term: true,
        }
    }

    pub fn with_epsilon(mut self, eps: T) -> Self {
        self.epsilon = Some(eps);
        self
    }

    pub fn with_level(mut self, level: usize) -> Self {
        self.level = level;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.domain.validate()?;
        self.noise.validate()?;
        if self.level == 0 {
            return Err(Error::param("Galerkin level must be at least 1"));
        }
        if !(self.horizon > T::zero()) || !self.horizon.is_finite() {
            return Err(Error::param("horizon must be positive and finite"));
        }
        if !(self.max_step > T::zero() && self.max_step <= self.horizon) {
            return Err(Error::param("max step must lie in (0, horizon]"));
        }
        if let Some(eps) = self.epsilon {
            if !(eps > T::zero()) || !eps.is_finite() {
                return Err(Error::param("epsilon must be positive"));
            }
        }
        if !self.u0.is_finite() {
            return Err(Error::param("initial data must be finite"));
        }
        Ok(())
    }

    /// `ε`, with the unscaled equation read as `ε = 1`.
    pub fn noise_scale(&self) -> T {
        self.epsilon.unwrap_or_else(T::one)
    }
}
