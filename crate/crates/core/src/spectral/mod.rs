//! Dirichlet sine basis on an interval, quadrature, spectral fields and the
//! path metric used to compare trajectories.

mod basis;
mod domain;
mod field;
mod quadrature;
mod trajectory;

pub use basis::Basis;
pub use domain::{Domain, DEFAULT_NODES, MIN_NODES};
pub use field::SpectralField;
pub use quadrature::{gauss_legendre, Quadrature, PANEL_ORDER};
pub use trajectory::{path_metric, union_grid, TrajectorySample};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `(kπ/L)²`.
pub fn eigenvalue<T: Real>(k: i64, domain: &Domain<T>) -> Result<T> {
    domain.eigenvalue(k)
}

/// Composite Gauss–Legendre value of `∫_0^L f` with at least `nodes` points.
pub fn quadrature<T: Real, F: Fn(T) -> T>(f: F, length: T, nodes: usize) -> Result<T> {
    if nodes < MIN_NODES {
        return Err(Error::param(format!("at least {MIN_NODES} nodes required")));
    }
    Quadrature::composite(T::zero(), length, nodes)?.integrate(f)
}
