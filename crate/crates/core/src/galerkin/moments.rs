use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::scalar::Real;

use super::system::GalerkinSystem;

/// Two-sided normal quantile used for ensemble confidence intervals.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Monte Carlo mean with a normal-approximation 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
    pub lower: f64,
    pub upper: f64,
    pub samples: usize,
}

impl Estimate {
    /// Sample mean and CI of `xs`, summed in the given order.
    pub fn from_samples(xs: &[f64]) -> Self {
        let k = xs.len();
        if k == 0 {
            return Self {
                mean: f64::NAN,
                std_err: f64::NAN,
                lower: f64::NAN,
                upper: f64::NAN,
                samples: 0,
            };
        }
        let kf = k as f64;
        let mean = xs.iter().sum::<f64>() / kf;
        let var = if k > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (kf - 1.0)
        } else {
            0.0
        };
        let std_err = (var / kf).sqrt();
        Self {
            mean,
            std_err,
            lower: mean - Z_95 * std_err,
            upper: mean + Z_95 * std_err,
            samples: k,
        }
    }
}

/// Path that exploded during a moment run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowUpRecord {
    pub path: u64,
    pub time: f64,
    pub norm_history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentReport {
    pub p: f64,
    pub horizon: f64,
    pub level: usize,
    /// `E sup_t ‖u(t)‖^p` over the surviving paths.
    pub sup_moment: Estimate,
    /// `E ∫ ‖u‖^{p−2} ‖u‖²_{W₀^{1,2}} dt` over the surviving paths.
    pub dissipation: Estimate,
    pub blow_ups: Vec<BlowUpRecord>,
}

impl MomentReport {
    pub fn exploded(&self) -> bool {
        !self.blow_ups.is_empty()
    }
}

/// Ensemble estimate of the `p`-th moment quantities over `paths` paths whose
/// seeds derive from `seed_root`. Blow-ups are recorded, not averaged.
pub fn moment_estimate<T: Real>(
    system: &GalerkinSystem<T>,
    p: f64,
    paths: usize,
    seed_root: u64,
) -> Result<MomentReport> {
    if !(p >= 2.0) || !p.is_finite() {
        return Err(Error::param("moment order p must be at least 2"));
    }
    if paths == 0 {
        return Err(Error::param("ensemble size must be positive"));
    }
    let domain = &system.config().domain;
    let outcomes: Vec<Result<(f64, f64)>> = (0..paths as u64)
        .into_par_iter()
        .map(|k| {
            let path = system.simulate(derive_seed(seed_root, k))?;
            let mut sup = 0.0f64;
            let mut integral = 0.0;
            for (w, s) in path.times().windows(2).zip(path.states()) {
                let norm = s.l2_norm().as_f64();
                integral += (w[1] - w[0]).as_f64() * norm.powf(p - 2.0) * s.h1_norm_sq(domain).as_f64();
            }
            for s in path.states() {
                sup = sup.max(s.l2_norm().as_f64().powf(p));
            }
            Ok((sup, integral))
        })
        .collect();

    let mut sups = Vec::with_capacity(paths);
    let mut dissipation = Vec::with_capacity(paths);
    let mut blow_ups = Vec::new();
    for (k, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok((s, d)) => {
                sups.push(s);
                dissipation.push(d);
            }
            Err(Error::BlowUp { time, norm_history }) => blow_ups.push(BlowUpRecord {
                path: k as u64,
                time,
                norm_history,
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(MomentReport {
        p,
        horizon: system.config().horizon.as_f64(),
        level: system.level(),
        sup_moment: Estimate::from_samples(&sups),
        dissipation: Estimate::from_samples(&dissipation),
        blow_ups,
    })
}
