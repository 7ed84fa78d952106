//! Poisson random measures on `[0, T] × {z_1, …, z_m}` and their controlled
//! (thinned) versions.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::control::Control;
use crate::error::{Error, Result};
use crate::rng::{purpose, StreamKey};
use crate::scalar::Real;

use super::marks::MarkSpace;

/// Upper limit on the expected number of events of a single path.
pub const MAX_EXPECTED_EVENTS: f64 = 1e7;

/// One point of the random measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpEvent<T> {
    pub time: T,
    pub atom: usize,
    pub multiplicity: u32,
}

fn check_horizon<T: Real>(horizon: T, scale: T) -> Result<()> {
    if !(horizon > T::zero()) || !horizon.is_finite() {
        return Err(Error::param("horizon must be positive and finite"));
    }
    if !(scale > T::zero()) || !scale.is_finite() {
        return Err(Error::param("rate scale must be positive and finite"));
    }
    Ok(())
}

fn check_expected(expected: f64) -> Result<()> {
    if expected > MAX_EXPECTED_EVENTS {
        return Err(Error::TooManyEvents {
            expected,
            cap: MAX_EXPECTED_EVENTS,
        });
    }
    Ok(())
}

/// Arrival times of a homogeneous Poisson process of rate `rate` on
/// `(0, horizon]`, drawn from the atom's arrival stream.
fn arrivals<T: Real>(rate: T, horizon: T, seed: u64, atom: usize) -> Vec<T> {
    if !(rate > T::zero()) {
        return Vec::new();
    }
    let mut rng = StreamKey::new(seed, 0, atom as u64, purpose::ARRIVALS).rng();
    let (rate, horizon) = (rate.as_f64(), horizon.as_f64());
    let mut out = Vec::new();
    let mut t = 0.0;
    loop {
        let gap: f64 = Exp1.sample(&mut rng);
        t += gap / rate;
        if t > horizon {
            break;
        }
        out.push(T::lit(t));
    }
    out
}

fn sort_events<T: Real>(events: &mut [JumpEvent<T>]) {
    events.sort_by(|a, b| {
        a.time
            .partial_cmp(&b.time)
            .expect("finite times")
            .then(a.atom.cmp(&b.atom))
    });
}

/// Samples the PRM with intensity `rate_scale · w_i` per atom over `(0, T]`.
///
/// Atoms are independent Poisson processes keyed by `(seed, atom)`; the merged
/// list is sorted by time.
pub fn sample_prm<T: Real>(marks: &MarkSpace<T>, horizon: T, rate_scale: T, seed: u64) -> Result<Vec<JumpEvent<T>>> {
    check_horizon(horizon, rate_scale)?;
    if marks.is_empty() {
        return Err(Error::Configuration("mark space has no atoms".into()));
    }
    check_expected((rate_scale * marks.total_intensity() * horizon).as_f64())?;
    let mut events: Vec<JumpEvent<T>> = marks
        .atoms()
        .iter()
        .enumerate()
        .flat_map(|(i, a)| {
            arrivals(rate_scale * a.weight, horizon, seed, i)
                .into_iter()
                .map(move |time| JumpEvent {
                    time,
                    atom: i,
                    multiplicity: 1,
                })
        })
        .collect();
    sort_events(&mut events);
    Ok(events)
}

/// Samples `N^φ` with intensity `φ(t, z_i) · base_scale · w_i` by thinning a
/// dominating PRM of intensity `base_scale · sup_t φ(·, z_i) · w_i`.
///
/// The dominating arrivals use the same stream as [`sample_prm`], so `φ ≡ 1`
/// reproduces it event for event.
pub fn sample_controlled_prm<T: Real>(
    marks: &MarkSpace<T>,
    horizon: T,
    base_scale: T,
    phi: &Control<T>,
    seed: u64,
) -> Result<Vec<JumpEvent<T>>> {
    check_horizon(horizon, base_scale)?;
    if marks.is_empty() {
        return Err(Error::Configuration("mark space has no atoms".into()));
    }
    phi.check_shape(marks.len(), horizon)?;
    let sups: Vec<T> = (0..marks.len()).map(|i| phi.sup_for_atom(i)).collect();
    let expected: T = marks
        .atoms()
        .iter()
        .zip(&sups)
        .map(|(a, &s)| base_scale * s * a.weight * horizon)
        .sum();
    check_expected(expected.as_f64())?;

    let mut events = Vec::new();
    for (i, (a, &sup)) in marks.atoms().iter().zip(&sups).enumerate() {
        let candidates = arrivals(base_scale * sup * a.weight, horizon, seed, i);
        if candidates.is_empty() {
            continue;
        }
        let mut thin = StreamKey::new(seed, 0, i as u64, purpose::THINNING).rng();
        for time in candidates {
            let u: f64 = thin.random();
            if T::lit(u) * sup < phi.value_at(time, i) {
                events.push(JumpEvent {
                    time,
                    atom: i,
                    multiplicity: 1,
                });
            }
        }
    }
    sort_events(&mut events);
    Ok(events)
}
