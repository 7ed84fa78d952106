use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{Basis, SpectralField};

use super::marks::MarkSpace;

/// Shape of the noise coefficient. Every family factors as
/// `η(u; z) = h(z) ψ(u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseFamily {
    /// `ψ(u) = M1 + M2 tanh(u)`.
    Tanh,
    /// `ψ(u) = M1 + M2 u / (1 + |u|)^{1−θ}`.
    Softpower,
    /// `ψ(u) = M1 + M2 sin(u √log(e + u²))`: bounded, but its slope grows
    /// like `√(log|u|)`, so it needs the `K2` term of the log-Lipschitz
    /// condition and is not globally Lipschitz.
    Loglip,
}

/// A concrete noise coefficient `η(u; z) = h(z) ψ(u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseCoefficient<T> {
    pub family: NoiseFamily,
    pub m1: T,
    pub m2: T,
    pub theta: T,
}

impl<T: Real> NoiseCoefficient<T> {
    pub fn new(family: NoiseFamily, m1: T, m2: T, theta: T) -> Result<Self> {
        let nc = Self {
            family,
            m1,
            m2,
            theta,
        };
        nc.validate()?;
        Ok(nc)
    }

    pub fn tanh(m1: T, m2: T) -> Self {
        Self {
            family: NoiseFamily::Tanh,
            m1,
            m2,
            theta: T::zero(),
        }
    }

    /// The coefficient that is identically zero.
    pub fn zero() -> Self {
        Self::tanh(T::zero(), T::zero())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m1 >= T::zero()) || !self.m1.is_finite() || !(self.m2 >= T::zero()) || !self.m2.is_finite()
        {
            return Err(Error::param("M1 and M2 must be nonnegative and finite"));
        }
        if !(self.theta >= T::zero() && self.theta < T::one()) {
            return Err(Error::param(format!(
                "theta must lie in [0,1) (sub-linear growth), got {}",
                self.theta
            )));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.m1 == T::zero() && self.m2 == T::zero()
    }

    /// `ψ(u)`.
    #[inline]
    pub fn profile(&self, u: T) -> T {
        let shape = match self.family {
            NoiseFamily::Tanh => u.tanh(),
            NoiseFamily::Softpower => u / (T::one() + u.abs()).powf(T::one() - self.theta),
            NoiseFamily::Loglip => (u * (T::E() + u * u).ln().sqrt()).sin(),
        };
        self.m1 + self.m2 * shape
    }

    /// `η(u; z) = amplitude · ψ(u)`.
    #[inline]
    pub fn eval(&self, u: T, amplitude: T) -> T {
        amplitude * self.profile(u)
    }

    /// Constants `(K1, K2)` with
    /// `|η(u)−η(v)| ≤ (K1 + K2 log₊(|u|∨|v|)^{1/2}) |u−v| h(z)`.
    pub fn log_lipschitz_constants(&self) -> (T, T) {
        match self.family {
            NoiseFamily::Tanh | NoiseFamily::Softpower => (self.m2, T::zero()),
            // s = √log(e+u²): |d/du (u s)| ≤ s + 1/s ≤ √(1+ln 2) + 1 + √2 log₊|u|^{1/2}
            NoiseFamily::Loglip => (T::lit(2.5) * self.m2, T::SQRT_2() * self.m2),
        }
    }

    /// Constants `(M1, M2, θ)` with `|η(u)| ≤ (M1 + M2|u|^θ) h(z)`.
    pub fn growth_constants(&self) -> (T, T, T) {
        match self.family {
            NoiseFamily::Tanh | NoiseFamily::Loglip => (self.m1 + self.m2, T::zero(), self.theta),
            NoiseFamily::Softpower => (self.m1, self.m2, self.theta),
        }
    }

    /// Factor `c` with `‖η(u)−η(v)‖_{L²} ≤ c h(z) ‖u−v‖_{L²}`, when the
    /// family is globally Lipschitz.
    pub fn lipschitz_factor(&self) -> Option<T> {
        match self.family {
            NoiseFamily::Tanh | NoiseFamily::Softpower => Some(self.m2),
            NoiseFamily::Loglip => None,
        }
    }

    /// Slack of the sub-linear growth bound at `u` (nonnegative when it holds).
    pub fn growth_margin(&self, u: T, amplitude: T) -> T {
        let (m1, m2, theta) = self.growth_constants();
        (m1 + m2 * u.abs().powf(theta)) * amplitude - self.eval(u, amplitude).abs()
    }

    /// Slack of the log-Lipschitz bound at `(u, v)`.
    pub fn log_lipschitz_margin(&self, u: T, v: T, amplitude: T) -> T {
        let (k1, k2) = self.log_lipschitz_constants();
        let d = (u - v).abs();
        let envelope = (k1 * d + k2 * d * u.abs().max(v.abs()).log_plus().sqrt()) * amplitude;
        envelope - (self.eval(u, amplitude) - self.eval(v, amplitude)).abs()
    }
}

/// `P_n[η(u(·); z_i)]` by quadrature against each basis function.
pub fn eta_eval<T: Real>(
    nc: &NoiseCoefficient<T>,
    u: &SpectralField<T>,
    atom: usize,
    marks: &MarkSpace<T>,
    basis: &Basis<T>,
) -> Result<SpectralField<T>> {
    let a = marks
        .atoms()
        .get(atom)
        .ok_or_else(|| Error::param(format!("atom index {atom} out of range")))?;
    let h = a.amplitude();
    let coeffs = basis.project_pointwise(u.coeffs(), |v| nc.eval(v, h))?;
    SpectralField::new(coeffs)
}
