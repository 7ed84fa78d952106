//! Composite Gauss–Legendre quadrature on an interval.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Points per panel of the composite rule.
pub const PANEL_ORDER: usize = 8;

/// Nodes and weights of the `order`-point Gauss–Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "quadrature order must be positive");
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order as f64;
    for i in 0..order.div_ceil(2) {
        // Tricomi initial guess for the i-th root (descending order).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(order, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if order == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=order {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = order as f64;
    let d = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A fixed composite Gauss–Legendre rule on `[a, b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> Quadrature<T> {
    /// Composite rule with at least `min_nodes` points: `ceil(min_nodes / 8)`
    /// equal panels, each carrying an 8-point Gauss–Legendre rule.
    pub fn composite(a: T, b: T, min_nodes: usize) -> Result<Self> {
        if !(b > a) {
            return Err(Error::param("quadrature interval must satisfy a < b"));
        }
        if min_nodes == 0 {
            return Err(Error::param("quadrature needs at least one node"));
        }
        let panels = min_nodes.div_ceil(PANEL_ORDER);
        let (ref_nodes, ref_weights) = gauss_legendre(PANEL_ORDER);
        let (a64, b64) = (a.as_f64(), b.as_f64());
        let h = (b64 - a64) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * PANEL_ORDER);
        let mut weights = Vec::with_capacity(panels * PANEL_ORDER);
        for p in 0..panels {
            let left = a64 + h * p as f64;
            for (x, w) in ref_nodes.iter().zip(&ref_weights) {
                nodes.push(T::lit(left + 0.5 * h * (x + 1.0)));
                weights.push(T::lit(0.5 * h * w));
            }
        }
        Ok(Self { nodes, weights })
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates `f`, failing on the first non-finite sample.
    pub fn integrate<F: Fn(T) -> T>(&self, f: F) -> Result<T> {
        let mut acc = T::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::Numeric { x: x.as_f64() });
            }
            acc = acc + w * v;
        }
        Ok(acc)
    }

    /// Integrates values already sampled at `self.nodes()`.
    pub fn integrate_values(&self, values: &[T]) -> Result<T> {
        debug_assert_eq!(values.len(), self.nodes.len());
        let mut acc = T::zero();
        for (k, (&v, &w)) in values.iter().zip(&self.weights).enumerate() {
            if !v.is_finite() {
                return Err(Error::Numeric { x: self.nodes[k].as_f64() });
            }
            acc = acc + w * v;
        }
        Ok(acc)
    }
}
