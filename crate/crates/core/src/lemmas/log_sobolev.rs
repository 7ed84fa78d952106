use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{Basis, SpectralField};

/// Two sides of an inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound<T> {
    pub lhs: T,
    pub rhs: T,
}

impl<T: Real> Bound<T> {
    /// `rhs − lhs`; nonnegative when the inequality holds.
    pub fn gap(&self) -> T {
        self.rhs - self.lhs
    }
}

pub(crate) fn node_values<T: Real>(basis: &Basis<T>, u: &SpectralField<T>) -> Result<Vec<T>> {
    if u.level() > basis.level() {
        return Err(Error::param(format!(
            "field level {} exceeds basis level {}",
            u.level(),
            basis.level()
        )));
    }
    Ok(basis.synthesize(u.coeffs()))
}

fn check_eps<T: Real>(eps: T) -> Result<()> {
    if !(eps > T::zero()) || !eps.is_finite() {
        return Err(Error::param(format!("eps must be positive (got {eps})")));
    }
    Ok(())
}

pub(crate) fn check_eps_alpha<T: Real>(eps: T, alpha: T) -> Result<()> {
    check_eps(eps)?;
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(Error::param(format!("alpha must lie in (0,1) (got {alpha})")));
    }
    Ok(())
}

/// `‖u‖² log‖u‖` with the 0·log 0 = 0 convention.
pub(crate) fn sq_log_norm<T: Real>(norm: T) -> T {
    norm * norm.x_log_abs()
}

/// Right-hand side common to both log-Sobolev variants:
/// `ε‖u‖²_{W} + (d/4) log(1/ε) ‖u‖² + ‖u‖² log‖u‖`.
fn log_sobolev_rhs<T: Real>(u: &SpectralField<T>, eps: T, d: usize, basis: &Basis<T>) -> T {
    let l2_sq = u.l2_norm_sq();
    eps * u.h1_norm_sq(basis.domain())
        + T::from_usize_lossy(d) / T::lit(4.0) * eps.recip().ln() * l2_sq
        + sq_log_norm(l2_sq.sqrt())
}

/// Both sides of `∫|u|² log|u| ≤ ε‖u‖²_{W₀^{1,2}} + (d/4)log(1/ε)‖u‖²
/// + ‖u‖² log‖u‖`.
pub fn log_sobolev<T: Real>(u: &SpectralField<T>, eps: T, d: usize, basis: &Basis<T>) -> Result<Bound<T>> {
    check_eps(eps)?;
    let values = node_values(basis, u)?;
    let integrand: Vec<T> = values.iter().map(|&v| v * v.x_log_abs()).collect();
    let lhs = basis.quadrature().integrate_values(&integrand)?;
    Ok(Bound {
        lhs,
        rhs: log_sobolev_rhs(u, eps, d, basis),
    })
}

/// Signed slack (RHS − LHS) of the log-Sobolev inequality.
pub fn log_sobolev_gap<T: Real>(u: &SpectralField<T>, eps: T, d: usize, basis: &Basis<T>) -> Result<T> {
    log_sobolev(u, eps, d, basis).map(|b| b.gap())
}

/// The `log₊` variant, whose right-hand side carries the extra `λ(D)/(2e)`.
pub fn log_sobolev_plus<T: Real>(
    u: &SpectralField<T>,
    eps: T,
    d: usize,
    basis: &Basis<T>,
) -> Result<Bound<T>> {
    check_eps(eps)?;
    let values = node_values(basis, u)?;
    let integrand: Vec<T> = values.iter().map(|&v| v * v * v.abs().log_plus()).collect();
    let lhs = basis.quadrature().integrate_values(&integrand)?;
    let extra = basis.domain().measure() / (T::lit(2.0) * T::E());
    Ok(Bound {
        lhs,
        rhs: log_sobolev_rhs(u, eps, d, basis) + extra,
    })
}

pub fn log_sobolev_plus_gap<T: Real>(
    u: &SpectralField<T>,
    eps: T,
    d: usize,
    basis: &Basis<T>,
) -> Result<T> {
    log_sobolev_plus(u, eps, d, basis).map(|b| b.gap())
}
