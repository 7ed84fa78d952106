use rayon::prelude::*;
use serde::Serialize;

use crate::control::Control;
use crate::error::{Error, Result};
use crate::galerkin::{Estimate, GalerkinSystem, SdeConfig, Z_95};
use crate::rng::derive_seed;
use crate::scalar::Real;
use crate::skeleton::solve_skeleton_on_grid;
use crate::spectral::path_metric;

use super::target::TargetFunctional;

/// Smallest ensemble accepted by [`tail_probability`].
pub const MIN_TAIL_PATHS: usize = 100;

/// Wilson score interval for `hits` successes out of `n` trials.
pub fn wilson_interval(hits: usize, n: usize, z: f64) -> (f64, f64) {
    let n = n as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lower = if hits == 0 { 0.0 } else { (center - half).max(0.0) };
    let upper = if hits as f64 == n { 1.0 } else { (center + half).min(1.0) };
    (lower, upper)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailRow {
    pub epsilon: f64,
    pub paths: usize,
    pub hits: usize,
    pub p_hat: f64,
    pub lower: f64,
    pub upper: f64,
    /// `ε² log p̂`, absent when there were no hits.
    pub scaled_log: Option<f64>,
    /// `ε log p̂`, the normalization matching jump size `ε` at rate `ε⁻¹`.
    pub eps_log: Option<f64>,
    /// No hits: only the upper bound is informative.
    pub undersampled: bool,
}

/// Monte Carlo frequency of the target event under the `ε`-scaled equation
/// for each `ε`, with Wilson intervals. Path `k` uses the same seed at every
/// `ε`.
pub fn tail_probability<T: Real>(
    base: &SdeConfig<T>,
    target: &TargetFunctional<T>,
    epsilons: &[T],
    paths: usize,
    seed_root: u64,
) -> Result<Vec<TailRow>> {
    if paths < MIN_TAIL_PATHS {
        return Err(Error::param(format!("tail estimates need at least {MIN_TAIL_PATHS} paths")));
    }
    target.validate(base.level)?;
    epsilons
        .iter()
        .map(|&eps| {
            let system = GalerkinSystem::new(base.clone().with_epsilon(eps))?;
            let hits: Vec<Result<bool>> = (0..paths as u64)
                .into_par_iter()
                .map(|k| {
                    let path = system.simulate(derive_seed(seed_root, k))?;
                    Ok(target.contains(path.terminal()))
                })
                .collect();
            let mut count = 0;
            for h in hits {
                count += usize::from(h?);
            }
            let p_hat = count as f64 / paths as f64;
            let (lower, upper) = wilson_interval(count, paths, Z_95);
            let e = eps.as_f64();
            Ok(TailRow {
                epsilon: e,
                paths,
                hits: count,
                p_hat,
                lower,
                upper,
                scaled_log: (count > 0).then(|| e * e * p_hat.ln()),
                eps_log: (count > 0).then(|| e * p_hat.ln()),
                undersampled: count == 0,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ldp1Row {
    pub epsilon: f64,
    pub metric: Estimate,
    pub delta: f64,
    /// Fraction of paths with `ρ_T > δ`.
    pub exceedance: f64,
    pub exceedance_lower: f64,
    pub exceedance_upper: f64,
}

/// Per-`ε` distribution of `ρ_T(ũ_ε, u_φ)` between controlled SDE paths and
/// the skeleton solution for `phi`, the skeleton solved on each path's grid.
pub fn ldp1_diagnostic<T: Real>(
    base: &SdeConfig<T>,
    phi: &Control<T>,
    class_bound: T,
    epsilons: &[T],
    paths: usize,
    delta: T,
    seed_root: u64,
) -> Result<Vec<Ldp1Row>> {
    if !phi.in_bounded_class(class_bound) {
        return Err(Error::ControlClass(format!(
            "control leaves the bounded class [1/{class_bound}, {class_bound}]"
        )));
    }
    if paths == 0 {
        return Err(Error::param("ensemble size must be positive"));
    }
    if !(delta >= T::zero()) {
        return Err(Error::param("exceedance threshold must be nonnegative"));
    }
    epsilons
        .iter()
        .map(|&eps| {
            let system = GalerkinSystem::new(base.clone().with_epsilon(eps))?;
            let horizon = system.config().horizon;
            let metrics: Vec<Result<f64>> = (0..paths as u64)
                .into_par_iter()
                .map(|k| {
                    let path = system.simulate_controlled(phi, derive_seed(seed_root, k))?;
                    let skeleton = solve_skeleton_on_grid(&system, phi, path.times())?;
                    Ok(path_metric(&path, &skeleton, T::zero(), horizon, &system.config().domain)?.as_f64())
                })
                .collect();
            let metrics = metrics.into_iter().collect::<Result<Vec<_>>>()?;
            let over = metrics.iter().filter(|&&m| m > delta.as_f64()).count();
            let (lo, hi) = wilson_interval(over, paths, Z_95);
            Ok(Ldp1Row {
                epsilon: eps.as_f64(),
                metric: Estimate::from_samples(&metrics),
                delta: delta.as_f64(),
                exceedance: over as f64 / paths as f64,
                exceedance_lower: lo,
                exceedance_upper: hi,
            })
        })
        .collect()
}
