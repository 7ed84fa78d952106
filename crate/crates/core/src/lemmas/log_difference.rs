use crate::error::Result;
use crate::scalar::Real;
use crate::spectral::{Basis, SpectralField};

use super::log_sobolev::{check_eps_alpha, node_values, sq_log_norm, Bound};

/// `(1/(2(1−α)e)) (‖ξ‖^{2(1−α)} + ‖ζ‖^{2(1−α)}) ‖ξ−ζ‖^{2α}`.
fn mixed_power_term<T: Real>(xi_norm: T, zeta_norm: T, diff_norm: T, alpha: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    let k = one / (two * (one - alpha) * T::E());
    k * (xi_norm.powf(two * (one - alpha)) + zeta_norm.powf(two * (one - alpha)))
        * diff_norm.powf(two * alpha)
}

/// `ε‖w‖²_W + c‖w‖² + ‖w‖² log‖w‖` shared by both difference estimates.
fn leading_terms<T: Real>(diff: &SpectralField<T>, eps: T, l2_coeff: T, basis: &Basis<T>) -> T {
    let n = diff.l2_norm();
    eps * diff.h1_norm_sq(basis.domain()) + l2_coeff * n * n + sq_log_norm(n)
}

/// Certifies
/// `(ξ log|ξ| − ζ log|ζ|, ξ − ζ) ≤ ε‖ξ−ζ‖²_W + (1 + (d/4)log(1/ε))‖ξ−ζ‖²
///  + ‖ξ−ζ‖² log‖ξ−ζ‖ + (1/(2(1−α)e))(‖ξ‖^{2(1−α)} + ‖ζ‖^{2(1−α)})‖ξ−ζ‖^{2α}`.
pub fn log_diff_pairing_bound<T: Real>(
    xi: &SpectralField<T>,
    zeta: &SpectralField<T>,
    eps: T,
    alpha: T,
    d: usize,
    basis: &Basis<T>,
) -> Result<Bound<T>> {
    check_eps_alpha(eps, alpha)?;
    let a = node_values(basis, xi)?;
    let b = node_values(basis, zeta)?;
    let integrand: Vec<T> = a
        .iter()
        .zip(&b)
        .map(|(&x, &z)| (x.x_log_abs() - z.x_log_abs()) * (x - z))
        .collect();
    let lhs = basis.quadrature().integrate_values(&integrand)?;

    let diff = xi - zeta;
    let l2_coeff = T::one() + T::from_usize_lossy(d) / T::lit(4.0) * eps.recip().ln();
    let rhs = leading_terms(&diff, eps, l2_coeff, basis)
        + mixed_power_term(xi.l2_norm(), zeta.l2_norm(), diff.l2_norm(), alpha);
    Ok(Bound { lhs, rhs })
}

/// Certifies
/// `∫|ξ−ζ|² log₊(|ξ| ∨ |ζ|) ≤ ε‖ξ−ζ‖²_W + (d/4)log(1/ε)‖ξ−ζ‖² + ‖ξ−ζ‖² log‖ξ−ζ‖
///  + (1/(2(1−α)e))(‖ξ‖^{2(1−α)} + ‖ζ‖^{2(1−α)})‖ξ−ζ‖^{2α}
///  + (1/(2(1−α)e))(4λ(D))^{1−α}‖ξ−ζ‖^{2α}`.
pub fn log_plus_weighted_bound<T: Real>(
    xi: &SpectralField<T>,
    zeta: &SpectralField<T>,
    eps: T,
    alpha: T,
    d: usize,
    basis: &Basis<T>,
) -> Result<Bound<T>> {
    check_eps_alpha(eps, alpha)?;
    let a = node_values(basis, xi)?;
    let b = node_values(basis, zeta)?;
    let integrand: Vec<T> = a
        .iter()
        .zip(&b)
        .map(|(&x, &z)| {
            let w = x - z;
            w * w * x.abs().max(z.abs()).log_plus()
        })
        .collect();
    let lhs = basis.quadrature().integrate_values(&integrand)?;

    let diff = xi - zeta;
    let dn = diff.l2_norm();
    let one = T::one();
    let two = T::lit(2.0);
    let l2_coeff = T::from_usize_lossy(d) / T::lit(4.0) * eps.recip().ln();
    let measure_term = one / (two * (one - alpha) * T::E())
        * (T::lit(4.0) * basis.domain().measure()).powf(one - alpha)
        * dn.powf(two * alpha);
    let rhs = leading_terms(&diff, eps, l2_coeff, basis)
        + mixed_power_term(xi.l2_norm(), zeta.l2_norm(), dn, alpha)
        + measure_term;
    Ok(Bound { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Domain;

    fn basis() -> Basis<f64> {
        Basis::new(Domain::unit(), 8).unwrap()
    }

    #[test]
    fn equal_arguments() {
        let b = basis();
        let xi = SpectralField::new(vec![2.0, -1.0, 0.5]).unwrap();
        let p = log_diff_pairing_bound(&xi, &xi, 0.25, 0.5, 1, &b).unwrap();
        assert_eq!(p.lhs, 0.0);
        assert!(p.rhs >= 0.0);
        let q = log_plus_weighted_bound(&xi, &xi, 0.25, 0.5, 1, &b).unwrap();
        assert_eq!(q.lhs, 0.0);
        assert!(q.rhs >= 0.0);
    }

    #[test]
    fn small_fields_have_vanishing_log_plus_side() {
        let b = basis();
        // |e_1| ≤ √2, so amplitude 0.5 keeps |ξ| ≤ 0.71 pointwise
        let xi = SpectralField::new(vec![0.5]).unwrap();
        let zeta = SpectralField::new(vec![0.0, 0.3]).unwrap();
        let q = log_plus_weighted_bound(&xi, &zeta, 1.0, 0.3, 1, &b).unwrap();
        assert_eq!(q.lhs, 0.0);
    }

    #[test]
    fn parameter_checks() {
        let b = basis();
        let xi = SpectralField::new(vec![1.0]).unwrap();
        assert!(log_diff_pairing_bound(&xi, &xi, 0.0, 0.5, 1, &b).is_err());
        assert!(log_diff_pairing_bound(&xi, &xi, 1.0, 1.0, 1, &b).is_err());
        assert!(log_plus_weighted_bound(&xi, &xi, 1.0, 0.0, 1, &b).is_err());
    }
}
