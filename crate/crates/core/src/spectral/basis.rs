use crate::error::{Error, Result};
use crate::scalar::Real;

use super::domain::Domain;
use super::quadrature::Quadrature;

/// Sine basis `e_1..e_n` tabulated on the quadrature nodes of a domain.
///
/// This is the workhorse behind every `∫_D … e_j dx` in the solvers: fields
/// are synthesized on the nodes, a pointwise nonlinearity is applied, and the
/// result is analyzed back onto the first `n` modes.
#[derive(Debug, Clone)]
pub struct Basis<T> {
    domain: Domain<T>,
    level: usize,
    quad: Quadrature<T>,
    // row j (0-based) holds e_{j+1} at every node
    table: Vec<T>,
    eigenvalues: Vec<T>,
}

impl<T: Real> Basis<T> {
    pub fn new(domain: Domain<T>, level: usize) -> Result<Self> {
        domain.validate()?;
        if level == 0 {
            return Err(Error::param("Galerkin level must be at least 1"));
        }
        let quad = domain.quadrature()?;
        let m = quad.len();
        let mut table = Vec::with_capacity(level * m);
        for j in 1..=level {
            table.extend(quad.nodes().iter().map(|&x| domain.basis_unchecked(j, x)));
        }
        let eigenvalues = (1..=level).map(|k| domain.eigenvalue_unchecked(k)).collect();
        Ok(Self {
            domain,
            level,
            quad,
            table,
            eigenvalues,
        })
    }

    pub fn domain(&self) -> &Domain<T> {
        &self.domain
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn quadrature(&self) -> &Quadrature<T> {
        &self.quad
    }

    pub fn nodes(&self) -> &[T] {
        self.quad.nodes()
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    fn row(&self, j: usize) -> &[T] {
        let m = self.quad.len();
        &self.table[j * m..(j + 1) * m]
    }

    /// Values of `Σ coeffs_j e_j` at the quadrature nodes. Coefficients past
    /// the tabulated level are ignored.
    pub fn synthesize(&self, coeffs: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.quad.len()];
        self.synthesize_into(coeffs, &mut out);
        out
    }

    pub fn synthesize_into(&self, coeffs: &[T], out: &mut [T]) {
        out.iter_mut().for_each(|v| *v = T::zero());
        for (j, &c) in coeffs.iter().take(self.level).enumerate() {
            if c == T::zero() {
                continue;
            }
            for (o, &e) in out.iter_mut().zip(self.row(j)) {
                *o = *o + c * e;
            }
        }
    }

    /// `⟨values, e_j⟩` for `j = 1..=level`, values sampled at the nodes.
    pub fn analyze(&self, values: &[T]) -> Result<Vec<T>> {
        let mut weighted = Vec::with_capacity(values.len());
        for (k, (&v, &w)) in values.iter().zip(self.quad.weights()).enumerate() {
            if !v.is_finite() {
                return Err(Error::Numeric {
                    x: self.quad.nodes()[k].as_f64(),
                });
            }
            weighted.push(v * w);
        }
        Ok((0..self.level)
            .map(|j| {
                self.row(j)
                    .iter()
                    .zip(&weighted)
                    .fold(T::zero(), |acc, (&e, &v)| acc + e * v)
            })
            .collect())
    }

    /// `P_n f` for a function of `x`, by quadrature.
    pub fn project_fn<F: Fn(T) -> T>(&self, f: F) -> Result<Vec<T>> {
        let values: Vec<T> = self.quad.nodes().iter().map(|&x| f(x)).collect();
        self.analyze(&values)
    }

    /// `P_n[ψ(u)]` for a pointwise map `ψ` applied to the field with the
    /// given coefficients.
    pub fn project_pointwise<F: Fn(T) -> T>(&self, coeffs: &[T], psi: F) -> Result<Vec<T>> {
        let mut values = self.synthesize(coeffs);
        values.iter_mut().for_each(|v| *v = psi(*v));
        self.analyze(&values)
    }
}
