use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::basis::Basis;
use super::domain::Domain;

/// A Galerkin state `u_n = Σ_j coeffs_j e_j` in the Dirichlet sine basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpectralField<T> {
    coeffs: Vec<T>,
}

impl<T: Real> SpectralField<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::param(format!("coefficient {} is not finite", i + 1)));
        }
        Ok(Self { coeffs })
    }

    pub fn zeros(level: usize) -> Self {
        Self {
            coeffs: vec![T::zero(); level],
        }
    }

    /// `amplitude · e_k` at Galerkin level `level`.
    pub fn mode(level: usize, k: usize, amplitude: T) -> Self {
        let mut f = Self::zeros(level);
        if (1..=level).contains(&k) {
            f.coeffs[k - 1] = amplitude;
        }
        f
    }

    pub(crate) fn from_raw(coeffs: Vec<T>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn level(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// `‖u‖²_{L²}`, by Parseval.
    pub fn l2_norm_sq(&self) -> T {
        self.coeffs.iter().map(|&c| c * c).sum()
    }

    pub fn l2_norm(&self) -> T {
        self.l2_norm_sq().sqrt()
    }

    /// `‖u‖²_{W₀^{1,2}} = Σ λ_j coeffs_j²`.
    pub fn h1_norm_sq(&self, domain: &Domain<T>) -> T {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| domain.eigenvalue_unchecked(j + 1) * c * c)
            .sum()
    }

    /// `P_n`: keeps the first `n` coefficients (no-op when `n ≥ level`).
    pub fn project(&self, n: usize) -> Self {
        Self {
            coeffs: self.coeffs.iter().take(n).copied().collect(),
        }
    }

    /// Pads with zeros or truncates to exactly `n` coefficients.
    pub fn resize(&self, n: usize) -> Self {
        let mut coeffs = self.project(n).coeffs;
        coeffs.resize(n, T::zero());
        Self { coeffs }
    }

    /// Pointwise values `Σ_j coeffs_j e_j(x)`.
    pub fn evaluate(&self, domain: &Domain<T>, xs: &[T]) -> Result<Vec<T>> {
        xs.iter()
            .map(|&x| {
                domain.check_point(x)?;
                Ok(self
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, &c)| c * domain.basis_unchecked(j + 1, x))
                    .sum())
            })
            .collect()
    }

    /// Projects a function of `x` onto the first `basis.level()` modes.
    pub fn from_fn<F: Fn(T) -> T>(basis: &Basis<T>, f: F) -> Result<Self> {
        basis.project_fn(f).map(Self::from_raw)
    }

    /// Projects values sampled at the quadrature nodes of `basis`.
    pub fn from_node_values(basis: &Basis<T>, values: &[T]) -> Result<Self> {
        if values.len() != basis.nodes().len() {
            return Err(Error::param(format!(
                "expected {} node values, got {}",
                basis.nodes().len(),
                values.len()
            )));
        }
        basis.analyze(values).map(Self::from_raw)
    }

    pub fn scaled(&self, a: T) -> Self {
        Self::from_raw(self.coeffs.iter().map(|&c| a * c).collect())
    }

    /// `self += a · other` over the common prefix of coefficients.
    pub fn axpy(&mut self, a: T, other: &Self) {
        for (c, &o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *c = *c + a * o;
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        let n = self.level().max(other.level());
        let get = |v: &[T], i: usize| v.get(i).copied().unwrap_or_else(T::zero);
        Self::from_raw(
            (0..n)
                .map(|i| f(get(&self.coeffs, i), get(&other.coeffs, i)))
                .collect(),
        )
    }
}

impl<T: Real> Add for &SpectralField<T> {
    type Output = SpectralField<T>;
    fn add(self, rhs: Self) -> SpectralField<T> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<T: Real> Sub for &SpectralField<T> {
    type Output = SpectralField<T>;
    fn sub(self, rhs: Self) -> SpectralField<T> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, SQRT_2};

    #[test]
    fn evaluate_matches_analytic_modes() {
        let dom = Domain::<f64>::unit();
        let zero = SpectralField::<f64>::zeros(5);
        assert!(zero.evaluate(&dom, &[0.0, 0.3, 1.0]).unwrap().iter().all(|v| *v == 0.0));
        let one = SpectralField::new(vec![1.0]).unwrap();
        assert!((one.evaluate(&dom, &[0.5]).unwrap()[0] - SQRT_2).abs() < 1e-15);
        let two = SpectralField::new(vec![0.0, 1.0]).unwrap();
        assert!((two.evaluate(&dom, &[0.25]).unwrap()[0] - SQRT_2).abs() < 1e-15);
        assert!(matches!(
            one.evaluate(&dom, &[1.5]),
            Err(Error::OutsideDomain { .. })
        ));
        assert!(one.evaluate(&dom, &[-1e-9]).is_err());
    }

    #[test]
    fn project_truncates() {
        let f = SpectralField::new(vec![1.0, 0.5, 0.25]).unwrap();
        assert_eq!(f.project(2).coeffs(), &[1.0, 0.5]);
        assert_eq!(f.project(3), f);
        assert_eq!(f.project(7), f);
        assert_eq!(f.resize(5).coeffs(), &[1.0, 0.5, 0.25, 0.0, 0.0]);
    }

    #[test]
    fn norms() {
        let dom = Domain::<f64>::unit();
        let f = SpectralField::new(vec![3.0, 4.0]).unwrap();
        assert_eq!(f.l2_norm(), 5.0);
        let want = PI * PI * 9.0 + 4.0 * PI * PI * 16.0;
        assert!((f.h1_norm_sq(&dom) - want).abs() < 1e-10);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(SpectralField::new(vec![1.0, f64::NAN]).is_err());
        assert!(SpectralField::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn arithmetic_pads_shorter_operand() {
        let a = SpectralField::new(vec![1.0, 2.0]).unwrap();
        let b = SpectralField::new(vec![1.0]).unwrap();
        assert_eq!((&a - &b).coeffs(), &[0.0, 2.0]);
        assert_eq!((&b + &a).coeffs(), &[2.0, 2.0]);
    }
}
