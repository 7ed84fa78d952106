use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::SpectralField;

/// Terminal-state event whose probability or cost is estimated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TargetFunctional<T> {
    WholeSpace,
    /// Open ball `‖u(T) − center‖_{L²} < radius`.
    TerminalBall { center: SpectralField<T>, radius: T },
    /// `⟨u(T), e_1⟩ ≥ level`.
    TerminalMeanExceedance { level: T },
}

impl<T: Real> TargetFunctional<T> {
    pub fn validate(&self, level: usize) -> Result<()> {
        match self {
            Self::WholeSpace => Ok(()),
            Self::TerminalBall { center, radius } => {
                if !(*radius >= T::zero()) || !radius.is_finite() {
                    return Err(Error::param("ball radius must be nonnegative and finite"));
                }
                if center.level() != level {
                    return Err(Error::param(format!(
                        "ball center has level {}, system has {level}",
                        center.level()
                    )));
                }
                Ok(())
            }
            Self::TerminalMeanExceedance { level: l } => {
                if !l.is_finite() {
                    return Err(Error::param("exceedance level must be finite"));
                }
                Ok(())
            }
        }
    }

    /// Distance by which `u` misses the target (0 inside its closure).
    pub fn violation(&self, u: &SpectralField<T>) -> T {
        match self {
            Self::WholeSpace => T::zero(),
            Self::TerminalBall { center, radius } => ((u - center).l2_norm() - *radius).max(T::zero()),
            Self::TerminalMeanExceedance { level } => {
                let mean = u.coeffs().first().copied().unwrap_or_else(T::zero);
                (*level - mean).max(T::zero())
            }
        }
    }

    pub fn contains(&self, u: &SpectralField<T>) -> bool {
        match self {
            Self::WholeSpace => true,
            Self::TerminalBall { center, radius } => (u - center).l2_norm() < *radius,
            Self::TerminalMeanExceedance { level } => u.coeffs().first().copied().unwrap_or_else(T::zero) >= *level,
        }
    }
}
