//! Closed-form bounds from the nonlinear (Bihari-type) and logarithmic
//! Gronwall lemmas, evaluated on tabulated coefficient functions.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Inputs of `y(t) ≤ C + ∫_{t0}^t (f y + g y^α) ds`, with `f`, `g` sampled on
/// `times` (`times[0] = t0`, last entry = `t`).
#[derive(Debug, Clone, PartialEq)]
pub struct GronwallInputs<T> {
    pub c: T,
    pub alpha: T,
    pub times: Vec<T>,
    pub f: Vec<T>,
    pub g: Vec<T>,
}

/// Inputs of `y + a ≤ h + ∫_0^t f y + ∫_0^t g y log y`, sampled on `times`
/// starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LogGronwallInputs<T> {
    pub times: Vec<T>,
    pub h: Vec<T>,
    pub f: Vec<T>,
    pub g: Vec<T>,
    pub a: Vec<T>,
}

fn check_grid<T: Real>(times: &[T], series: &[(&str, &[T])]) -> Result<()> {
    if times.len() < 2 {
        return Err(Error::param("tabulation grid needs at least two points"));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::param("tabulation grid must be strictly increasing"));
    }
    for (name, values) in series {
        if values.len() != times.len() {
            return Err(Error::param(format!(
                "{name} has {} samples, grid has {}",
                values.len(),
                times.len()
            )));
        }
        if values.iter().any(|v| !(*v >= T::zero()) || !v.is_finite()) {
            return Err(Error::param(format!("{name} must be finite and nonnegative")));
        }
    }
    Ok(())
}

impl<T: Real> GronwallInputs<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.c >= T::zero()) {
            return Err(Error::param("C must be nonnegative"));
        }
        if !(self.alpha >= T::zero() && self.alpha < T::one()) {
            return Err(Error::param(format!(
                "alpha must lie in [0,1) (got {})",
                self.alpha
            )));
        }
        check_grid(&self.times, &[("f", &self.f), ("g", &self.g)])
    }
}

impl<T: Real> LogGronwallInputs<T> {
    pub fn validate(&self) -> Result<()> {
        check_grid(
            &self.times,
            &[("h", &self.h), ("f", &self.f), ("g", &self.g), ("a", &self.a)],
        )?;
        if self.times[0] != T::zero() {
            return Err(Error::param("log-Gronwall grid must start at 0"));
        }
        if !(self.h[0] >= T::one()) {
            return Err(Error::param(format!("h(0) must be at least 1 (got {})", self.h[0])));
        }
        if self.h.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::param("h must be nondecreasing"));
        }
        Ok(())
    }
}

/// Cumulative trapezoid integral, `out[0] = 0`.
pub fn cumulative_trapezoid<T: Real>(times: &[T], values: &[T]) -> Vec<T> {
    let half = T::lit(0.5);
    let mut out = Vec::with_capacity(times.len());
    let mut acc = T::zero();
    out.push(acc);
    for k in 1..times.len() {
        acc = acc + half * (times[k] - times[k - 1]) * (values[k] + values[k - 1]);
        out.push(acc);
    }
    out
}

fn trapezoid<T: Real>(times: &[T], values: &[T]) -> T {
    *cumulative_trapezoid(times, values).last().expect("non-empty grid")
}

/// `{C^{1−α} e^{(1−α)∫f} + (1−α)∫ g(s) e^{(1−α)∫_s^t f} ds}^{1/(1−α)}` at the
/// last grid time.
pub fn nonlinear_gronwall_bound<T: Real>(inputs: &GronwallInputs<T>) -> Result<T> {
    inputs.validate()?;
    let times = &inputs.times;
    let beta = T::one() - inputs.alpha;
    let big_f = cumulative_trapezoid(times, &inputs.f);
    let total = *big_f.last().expect("validated grid");
    let kernel: Vec<T> = inputs
        .g
        .iter()
        .zip(&big_f)
        .map(|(&g, &fs)| g * (beta * (total - fs)).exp())
        .collect();
    let base = if inputs.c > T::zero() {
        inputs.c.powf(beta) * (beta * total).exp()
    } else {
        T::zero()
    };
    let inner = base + beta * trapezoid(times, &kernel);
    Ok(inner.powf(beta.recip()))
}

/// `h(t)^{e^{G(t)}} · exp{e^{G(t)} ∫_0^t f(s) e^{−G(s)} ds}` with `G = ∫g`, at
/// the last grid time.
pub fn log_gronwall_bound<T: Real>(inputs: &LogGronwallInputs<T>) -> Result<T> {
    inputs.validate()?;
    let times = &inputs.times;
    let big_g = cumulative_trapezoid(times, &inputs.g);
    let g_t = *big_g.last().expect("validated grid");
    let weighted: Vec<T> = inputs
        .f
        .iter()
        .zip(&big_g)
        .map(|(&f, &gs)| f * (-gs).exp())
        .collect();
    let growth = g_t.exp();
    let h_t = *inputs.h.last().expect("validated grid");
    Ok(h_t.powf(growth) * (growth * trapezoid(times, &weighted)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, t0: f64, t: f64) -> Vec<f64> {
        (0..=n).map(|k| t0 + (t - t0) * k as f64 / n as f64).collect()
    }

    #[test]
    fn bihari_closed_form() {
        let times = grid(512, 0.0, 1.0);
        let inputs = GronwallInputs {
            c: 1.0,
            alpha: 0.5,
            f: vec![0.0; times.len()],
            g: vec![1.0; times.len()],
            times,
        };
        assert!((nonlinear_gronwall_bound(&inputs).unwrap() - 2.25).abs() < 1e-12);
    }

    #[test]
    fn reduces_to_classical_gronwall() {
        let times = grid(1024, 0.5, 2.0);
        let f: Vec<f64> = times.iter().map(|t| 0.3 + t).collect();
        let inputs = GronwallInputs {
            c: 2.0,
            alpha: 0.4,
            g: vec![0.0; times.len()],
            f,
            times,
        };
        // ∫_{0.5}^{2} (0.3 + t) dt = 0.45 + 1.875
        let want = 2.0 * (0.45f64 + 1.875).exp();
        assert!((nonlinear_gronwall_bound(&inputs).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn log_gronwall_closed_form() {
        let times = grid(512, 0.0, 1.0);
        let n = times.len();
        let inputs = LogGronwallInputs {
            h: vec![std::f64::consts::E; n],
            f: vec![0.0; n],
            g: vec![1.0; n],
            a: vec![0.0; n],
            times,
        };
        let want = std::f64::consts::E.powf(std::f64::consts::E);
        assert!((log_gronwall_bound(&inputs).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn parameter_errors() {
        let times = grid(4, 0.0, 1.0);
        let n = times.len();
        let bad_alpha = GronwallInputs {
            c: 1.0,
            alpha: 1.0,
            times: times.clone(),
            f: vec![0.0; n],
            g: vec![0.0; n],
        };
        assert!(nonlinear_gronwall_bound(&bad_alpha).is_err());
        let bad_h = LogGronwallInputs {
            times,
            h: vec![0.5; n],
            f: vec![0.0; n],
            g: vec![0.0; n],
            a: vec![0.0; n],
        };
        assert!(log_gronwall_bound(&bad_h).is_err());
    }
}
