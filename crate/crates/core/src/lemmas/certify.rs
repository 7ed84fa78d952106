//! Randomized certification suites for the analytic inequalities.
//!
//! Each suite draws instances from a keyed stream, evaluates the signed slack
//! of an inequality, and reports the worst case. The Gronwall suites compare
//! the closed-form bounds against an RK4 integration of the equality case.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::rng::{purpose, StreamKey};
use crate::spectral::{Basis, Domain, SpectralField};

use super::gronwall::{log_gronwall_bound, nonlinear_gronwall_bound, GronwallInputs, LogGronwallInputs};
use super::log_difference::{log_diff_pairing_bound, log_plus_weighted_bound};
use super::log_sobolev::log_sobolev_gap;

/// Absolute slack tolerated on quadrature-based certificates.
pub const GAP_TOLERANCE: f64 = 1e-8;
/// Relative slack tolerated on Gronwall comparisons.
pub const RELATIVE_TOLERANCE: f64 = 1e-6;
/// Grid used to tabulate Gronwall coefficients.
pub const GRONWALL_GRID: usize = 4096;
/// RK4 steps for the comparison ODEs.
pub const RK4_STEPS: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub instances: usize,
    /// Smallest observed slack (absolute or relative, see `tolerance`).
    pub worst_gap: f64,
    pub worst_instance: usize,
    pub failures: usize,
    pub tolerance: f64,
    pub passed: bool,
}

impl SuiteReport {
    fn from_gaps(suite: &str, gaps: &[f64], tolerance: f64) -> Self {
        let (worst_instance, worst_gap) = gaps
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, g)| if g < acc.1 { (i, g) } else { acc });
        let failures = gaps.iter().filter(|g| !(**g >= -tolerance)).count();
        Self {
            suite: suite.to_string(),
            instances: gaps.len(),
            worst_gap,
            worst_instance,
            failures,
            tolerance,
            passed: failures == 0,
        }
    }
}

/// A field with `1..=16` modes and coefficients uniform in `[-5, 5]`.
pub fn random_field(rng: &mut impl Rng, max_level: usize) -> SpectralField<f64> {
    let n = rng.random_range(1..=max_level);
    SpectralField::new((0..n).map(|_| rng.random_range(-5.0..=5.0)).collect())
        .expect("finite coefficients")
}

fn instance_rng(seed: u64, suite: u64, i: usize) -> rand_chacha::ChaCha8Rng {
    StreamKey::new(seed, i as u64, suite, purpose::CERTIFY).rng()
}

pub fn log_sobolev_suite(count: usize, seed: u64) -> Result<SuiteReport> {
    let basis = Basis::new(Domain::unit(), 16)?;
    let eps = [0.1, 0.5, 1.0];
    let gaps = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(seed, 1, i);
            let u = random_field(&mut rng, 16);
            log_sobolev_gap(&u, eps[i % eps.len()], 1, &basis)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::from_gaps("log_sobolev", &gaps, GAP_TOLERANCE))
}

fn pair_suite<F>(name: &str, tag: u64, count: usize, seed: u64, bound: F) -> Result<SuiteReport>
where
    F: Fn(&SpectralField<f64>, &SpectralField<f64>, f64, f64, &Basis<f64>) -> Result<f64> + Sync,
{
    let basis = Basis::new(Domain::unit(), 16)?;
    let gaps = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(seed, tag, i);
            let xi = random_field(&mut rng, 16);
            let zeta = random_field(&mut rng, 16);
            let eps = [0.25, 1.0][i % 2];
            let alpha = [0.3, 0.7][(i / 2) % 2];
            bound(&xi, &zeta, eps, alpha, &basis)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::from_gaps(name, &gaps, GAP_TOLERANCE))
}

pub fn log_diff_pairing_suite(count: usize, seed: u64) -> Result<SuiteReport> {
    pair_suite("log_diff_pairing", 2, count, seed, |x, z, e, a, b| {
        log_diff_pairing_bound(x, z, e, a, 1, b).map(|r| r.gap())
    })
}

pub fn log_plus_weighted_suite(count: usize, seed: u64) -> Result<SuiteReport> {
    pair_suite("log_plus_weighted", 3, count, seed, |x, z, e, a, b| {
        log_plus_weighted_bound(x, z, e, a, 1, b).map(|r| r.gap())
    })
}

/// Smooth nonnegative coefficient `a + b sin(ωt + φ)` with `a ≥ |b|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothProfile {
    pub offset: f64,
    pub amplitude: f64,
    pub frequency: f64,
    pub phase: f64,
}

impl SmoothProfile {
    pub fn random(rng: &mut impl Rng, max: f64) -> Self {
        let offset = rng.random_range(0.0..=max);
        Self {
            offset,
            amplitude: rng.random_range(-offset..=offset),
            frequency: rng.random_range(0.0..=6.0),
            phase: rng.random_range(0.0..=std::f64::consts::TAU),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.offset + self.amplitude * (self.frequency * t + self.phase).sin()).max(0.0)
    }

    pub fn tabulate(&self, times: &[f64]) -> Vec<f64> {
        times.iter().map(|&t| self.eval(t)).collect()
    }
}

fn uniform_grid(t0: f64, t: f64, cells: usize) -> Vec<f64> {
    (0..=cells)
        .map(|k| t0 + (t - t0) * k as f64 / cells as f64)
        .collect()
}

fn rk4<F: Fn(f64, f64) -> f64>(rhs: F, y0: f64, t0: f64, t: f64, steps: usize) -> f64 {
    let h = (t - t0) / steps as f64;
    let mut y = y0;
    for k in 0..steps {
        let s = t0 + h * k as f64;
        let k1 = rhs(s, y);
        let k2 = rhs(s + 0.5 * h, y + 0.5 * h * k1);
        let k3 = rhs(s + 0.5 * h, y + 0.5 * h * k2);
        let k4 = rhs(s + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    y
}

/// A random instance of the nonlinear Gronwall lemma together with the
/// RK4 solution of its equality case `y' = f y + g y^α`, `y(t0) = C`.
pub fn nonlinear_gronwall_instance(rng: &mut impl Rng) -> (GronwallInputs<f64>, f64) {
    let c = rng.random_range(0.0..=3.0);
    let alpha = rng.random_range(0.0..0.95);
    let t0 = rng.random_range(0.0..=0.5);
    let t = t0 + rng.random_range(0.2..=1.5);
    let f = SmoothProfile::random(rng, 1.5);
    let g = SmoothProfile::random(rng, 1.5);
    let times = uniform_grid(t0, t, GRONWALL_GRID);
    let inputs = GronwallInputs {
        c,
        alpha,
        f: f.tabulate(&times),
        g: g.tabulate(&times),
        times,
    };
    let y = rk4(
        |s, y| f.eval(s) * y + g.eval(s) * y.max(0.0).powf(alpha),
        c,
        t0,
        t,
        RK4_STEPS,
    );
    (inputs, y)
}

/// A random log-Gronwall instance with `h(t) = h0 + h1 t`, together with the
/// RK4 solution of `y' = h' + f y + g y log y`, `y(0) = h(0)`.
pub fn log_gronwall_instance(rng: &mut impl Rng) -> (LogGronwallInputs<f64>, f64) {
    let h0 = rng.random_range(1.0..=3.0);
    let h1 = rng.random_range(0.0..=1.0);
    let t = rng.random_range(0.2..=1.5);
    let f = SmoothProfile::random(rng, 1.0);
    let g = SmoothProfile::random(rng, 1.0);
    let times = uniform_grid(0.0, t, GRONWALL_GRID);
    let n = times.len();
    let inputs = LogGronwallInputs {
        h: times.iter().map(|s| h0 + h1 * s).collect(),
        f: f.tabulate(&times),
        g: g.tabulate(&times),
        a: vec![0.0; n],
        times,
    };
    let y = rk4(
        |s, y| h1 + f.eval(s) * y + g.eval(s) * y * y.ln(),
        h0,
        0.0,
        t,
        RK4_STEPS,
    );
    (inputs, y)
}

fn relative_margin(bound: f64, solution: f64) -> f64 {
    (bound - solution) / solution.abs().max(f64::MIN_POSITIVE)
}

pub fn nonlinear_gronwall_suite(count: usize, seed: u64) -> Result<SuiteReport> {
    let margins = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(seed, 4, i);
            let (inputs, y) = nonlinear_gronwall_instance(&mut rng);
            nonlinear_gronwall_bound(&inputs).map(|b| relative_margin(b, y))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::from_gaps("nonlinear_gronwall", &margins, RELATIVE_TOLERANCE))
}

pub fn log_gronwall_suite(count: usize, seed: u64) -> Result<SuiteReport> {
    let margins = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(seed, 5, i);
            let (inputs, y) = log_gronwall_instance(&mut rng);
            log_gronwall_bound(&inputs).map(|b| relative_margin(b, y))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::from_gaps("log_gronwall", &margins, RELATIVE_TOLERANCE))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_tracks_worst_case() {
        let r = SuiteReport::from_gaps("x", &[0.5, -1e-9, 2.0, -1e-3], 1e-8);
        assert_eq!(r.worst_instance, 3);
        assert_eq!(r.failures, 1);
        assert!(!r.passed);
    }

    #[test]
    fn small_suites_pass() {
        assert!(log_sobolev_suite(20, 1).unwrap().passed);
        assert!(nonlinear_gronwall_suite(5, 1).unwrap().passed);
        assert!(log_gronwall_suite(5, 1).unwrap().passed);
    }
}
