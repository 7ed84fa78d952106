use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::domain::Domain;
use super::field::SpectralField;

/// A sampled path: states are right-continuous and held constant on
/// `[t_k, t_{k+1})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample<T> {
    times: Vec<T>,
    states: Vec<SpectralField<T>>,
    jump_flags: Vec<bool>,
}

impl<T: Real> TrajectorySample<T> {
    pub fn new(times: Vec<T>, states: Vec<SpectralField<T>>, jump_flags: Vec<bool>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::param("trajectory needs at least one sample"));
        }
        if states.len() != times.len() || jump_flags.len() != times.len() {
            return Err(Error::param("times, states and jump flags differ in length"));
        }
        if times[0] != T::zero() {
            return Err(Error::param("trajectory must start at t = 0"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::param("trajectory times must be strictly increasing"));
        }
        let level = states[0].level();
        if states.iter().any(|s| s.level() != level) {
            return Err(Error::param("trajectory states differ in Galerkin level"));
        }
        Ok(Self {
            times,
            states,
            jump_flags,
        })
    }

    pub(crate) fn from_parts(times: Vec<T>, states: Vec<SpectralField<T>>, jump_flags: Vec<bool>) -> Self {
        debug_assert_eq!(times.len(), states.len());
        Self {
            times,
            states,
            jump_flags,
        }
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn states(&self) -> &[SpectralField<T>] {
        &self.states
    }

    pub fn jump_flags(&self) -> &[bool] {
        &self.jump_flags
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn horizon(&self) -> T {
        *self.times.last().expect("non-empty trajectory")
    }

    pub fn terminal(&self) -> &SpectralField<T> {
        self.states.last().expect("non-empty trajectory")
    }

    pub fn level(&self) -> usize {
        self.states[0].level()
    }

    /// Index of the sample in force at time `t` (last `t_k ≤ t`).
    fn index_at(&self, t: T) -> usize {
        match self.times.binary_search_by(|s| s.partial_cmp(&t).expect("finite times")) {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        }
    }

    /// State in force at `t` under the piecewise-constant-left convention.
    pub fn state_at(&self, t: T) -> &SpectralField<T> {
        &self.states[self.index_at(t)]
    }

    /// Resamples onto `grid` (which must start at 0), holding each state
    /// constant until the next original sample time.
    pub fn resample(&self, grid: &[T]) -> Result<Self> {
        let states = grid.iter().map(|&t| self.state_at(t).clone()).collect();
        let flags = grid
            .iter()
            .map(|t| {
                self.times
                    .binary_search_by(|s| s.partial_cmp(t).expect("finite times"))
                    .map(|i| self.jump_flags[i])
                    .unwrap_or(false)
            })
            .collect();
        Self::new(grid.to_vec(), states, flags)
    }

    /// Sup-in-time of `‖u(t)‖²_{L²}` plus `∫‖u‖²_{W₀^{1,2}}` over the horizon.
    pub fn energy(&self, domain: &Domain<T>) -> T {
        let sup = self
            .states
            .iter()
            .map(|s| s.l2_norm_sq())
            .fold(T::zero(), T::max);
        let integral = self
            .times
            .windows(2)
            .zip(&self.states)
            .map(|(w, s)| (w[1] - w[0]) * s.h1_norm_sq(domain))
            .sum::<T>();
        sup + integral
    }
}

/// Sorted union of two time grids (exact duplicates merged).
pub fn union_grid<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out: Vec<T> = a.iter().chain(b).copied().collect();
    out.sort_by(|x, y| x.partial_cmp(y).expect("finite times"));
    out.dedup();
    out
}

/// `ρ_{a,b}(u, v)`: the square root of
/// `sup_{[a,b]} ‖u − v‖²_{L²} + ∫_a^b ‖u − v‖²_{W₀^{1,2}} dt`, with the time
/// integral taken by the left-endpoint rule on the shared grid.
pub fn path_metric<T: Real>(
    u: &TrajectorySample<T>,
    v: &TrajectorySample<T>,
    a: T,
    b: T,
    domain: &Domain<T>,
) -> Result<T> {
    if u.times != v.times {
        return Err(Error::Alignment(format!(
            "grids differ ({} vs {} samples)",
            u.len(),
            v.len()
        )));
    }
    if !(a >= T::zero() && a <= b && b <= u.horizon()) {
        return Err(Error::Alignment(format!(
            "window [{a}, {b}] not inside [0, {}]",
            u.horizon()
        )));
    }
    let first = u.index_at(a);
    let last = u.index_at(b);
    let mut sup = T::zero();
    let mut integral = T::zero();
    for k in first..=last {
        let diff = &u.states[k] - &v.states[k];
        sup = sup.max(diff.l2_norm_sq());
        let start = u.times[k].max(a);
        let end = u.times.get(k + 1).copied().unwrap_or(b).min(b);
        if end > start {
            integral = integral + (end - start) * diff.h1_norm_sq(domain);
        }
    }
    Ok((sup + integral).sqrt())
}
