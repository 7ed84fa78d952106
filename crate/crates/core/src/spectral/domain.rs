use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::quadrature::Quadrature;

/// Default number of quadrature nodes.
pub const DEFAULT_NODES: usize = 512;
/// Smallest admissible quadrature node count.
pub const MIN_NODES: usize = 16;

/// The interval `(0, L)` with homogeneous Dirichlet conditions.
///
/// Only `dimension = 1` is supported; the dimension is kept so that
/// dimension-dependent constants (log-Sobolev, Lemma-style bounds) can be
/// evaluated with a caller-supplied `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain<T> {
    pub dimension: usize,
    pub length: T,
    pub nodes: usize,
}

impl<T: Real> Default for Domain<T> {
    fn default() -> Self {
        Self {
            dimension: 1,
            length: T::one(),
            nodes: DEFAULT_NODES,
        }
    }
}

impl<T: Real> Domain<T> {
    pub fn new(length: T, nodes: usize) -> Result<Self> {
        let dom = Self {
            dimension: 1,
            length,
            nodes,
        };
        dom.validate()?;
        Ok(dom)
    }

    pub fn unit() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension != 1 {
            return Err(Error::param(format!(
                "only one-dimensional domains are supported (got d = {})",
                self.dimension
            )));
        }
        if !(self.length > T::zero()) || !self.length.is_finite() {
            return Err(Error::param("domain length must be positive and finite"));
        }
        if self.nodes < MIN_NODES {
            return Err(Error::param(format!(
                "at least {MIN_NODES} quadrature nodes required (got {})",
                self.nodes
            )));
        }
        Ok(())
    }

    /// Lebesgue measure of the domain.
    pub fn measure(&self) -> T {
        self.length
    }

    pub fn quadrature(&self) -> Result<Quadrature<T>> {
        Quadrature::composite(T::zero(), self.length, self.nodes)
    }

    /// `k`-th Dirichlet eigenvalue `(kπ/L)²`, `k ≥ 1`.
    pub fn eigenvalue(&self, k: i64) -> Result<T> {
        if k < 1 {
            return Err(Error::InvalidIndex(k));
        }
        Ok(self.eigenvalue_unchecked(k as usize))
    }

    #[inline]
    pub(crate) fn eigenvalue_unchecked(&self, k: usize) -> T {
        let w = T::from_usize_lossy(k) * T::PI() / self.length;
        w * w
    }

    /// `e_k(x) = √(2/L) sin(kπx/L)`.
    pub fn basis_function(&self, k: i64, x: T) -> Result<T> {
        if k < 1 {
            return Err(Error::InvalidIndex(k));
        }
        self.check_point(x)?;
        Ok(self.basis_unchecked(k as usize, x))
    }

    #[inline]
    pub(crate) fn basis_unchecked(&self, k: usize, x: T) -> T {
        (T::lit(2.0) / self.length).sqrt() * (T::from_usize_lossy(k) * T::PI() * x / self.length).sin()
    }

    pub(crate) fn check_point(&self, x: T) -> Result<()> {
        if !(x >= T::zero() && x <= self.length) {
            return Err(Error::OutsideDomain {
                x: x.as_f64(),
                length: self.length.as_f64(),
            });
        }
        Ok(())
    }
}
