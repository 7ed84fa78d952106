use crate::control::Control;
use crate::error::{Error, Result};
use crate::noise::{eta_eval, sample_controlled_prm, sample_prm, JumpEvent};
use crate::scalar::Real;
use crate::spectral::{Basis, SpectralField, TrajectorySample};

use super::config::SdeConfig;
use super::grid::build_grid;

/// `‖u‖_{L²}` above which a path is declared exploded.
pub const BLOW_UP_NORM: f64 = 1e12;
/// Number of trailing norms carried in a blow-up error.
const NORM_HISTORY: usize = 16;

/// How the noise enters the drift between jumps.
#[derive(Debug, Clone, Copy)]
pub enum Forcing<'a, T> {
    /// Compensated PRM: drift `−Σ w_i H_i`, jumps of size `ε H_i`.
    Sde,
    /// Thinned PRM `N^{ε⁻¹φ}`: compensator `−Σ w_i φ_i H_i` plus the
    /// controlled drift `Σ w_i (φ_i − 1) H_i`.
    Controlled(&'a Control<T>),
    /// Skeleton ODE: drift `Σ w_i (g_i − 1) H_i`, no jumps.
    Skeleton(&'a Control<T>),
}

/// `(e^z − 1)/z`, continuous at 0.
fn phi1<T: Real>(z: T) -> T {
    if z.abs() < T::lit(1e-300) {
        T::one()
    } else {
        z.exp_m1() / z
    }
}

/// Galerkin truncation of the log-heat equation at a fixed level, with the
/// basis tables built once.
#[derive(Debug, Clone)]
pub struct GalerkinSystem<T> {
    cfg: SdeConfig<T>,
    basis: Basis<T>,
    u0: SpectralField<T>,
}

impl<T: Real> GalerkinSystem<T> {
    pub fn new(cfg: SdeConfig<T>) -> Result<Self> {
        cfg.validate()?;
        let basis = Basis::new(cfg.domain, cfg.level)?;
        let u0 = cfg.u0.resize(cfg.level);
        Ok(Self { cfg, basis, u0 })
    }

    pub fn config(&self) -> &SdeConfig<T> {
        &self.cfg
    }

    pub fn basis(&self) -> &Basis<T> {
        &self.basis
    }

    pub fn level(&self) -> usize {
        self.cfg.level
    }

    pub fn initial(&self) -> &SpectralField<T> {
        &self.u0
    }

    /// `P_n[u log|u|]`.
    pub fn drift_f(&self, u: &SpectralField<T>) -> Result<SpectralField<T>> {
        let coeffs = self.basis.project_pointwise(u.coeffs(), T::x_log_abs)?;
        Ok(SpectralField::from_raw(coeffs))
    }

    /// `P_n[η(P_n u; z_i)]`.
    pub fn jump_h(&self, u: &SpectralField<T>, atom: usize) -> Result<SpectralField<T>> {
        eta_eval(&self.cfg.noise, &u.project(self.level()), atom, &self.cfg.marks, &self.basis)
    }

    /// `P_n[ψ(u)]`; the jump coefficient of atom `i` is `h1_i` times this.
    fn profile(&self, values: &[T]) -> Result<Vec<T>> {
        let nc = &self.cfg.noise;
        let mapped: Vec<T> = values.iter().map(|&v| nc.profile(v)).collect();
        self.basis.analyze(&mapped)
    }

    /// Weighted amplitude multiplying `P_n ψ(u)` in the drift at time `t`.
    fn noise_drift_factor(&self, forcing: Forcing<'_, T>, t: T) -> T {
        let marks = &self.cfg.marks;
        match forcing {
            Forcing::Sde => -marks.weighted_amplitude(|_| T::one()),
            Forcing::Controlled(phi) => {
                let compensator = marks.weighted_amplitude(|i| phi.value_at(t, i));
                let control = marks.weighted_amplitude(|i| phi.value_at(t, i) - T::one());
                -compensator + control
            }
            Forcing::Skeleton(g) => marks.weighted_amplitude(|i| g.value_at(t, i) - T::one()),
        }
    }

    /// Drift vector (without the Laplacian) at state `u`, time `t`.
    fn drift(&self, u: &SpectralField<T>, t: T, forcing: Forcing<'_, T>) -> Result<Vec<T>> {
        let n = self.level();
        let values = self.basis.synthesize(u.coeffs());
        let mut out = vec![T::zero(); n];
        if self.cfg.log_term {
            let logs: Vec<T> = values.iter().map(|&v| v.x_log_abs()).collect();
            out = self.basis.analyze(&logs)?;
        }
        if !self.cfg.noise.is_zero() {
            let factor = self.noise_drift_factor(forcing, t);
            if factor != T::zero() {
                for (o, p) in out.iter_mut().zip(self.profile(&values)?) {
                    *o = *o + factor * p;
                }
            }
        }
        Ok(out)
    }

    /// Exponential-Euler drift step of length `dt` from time `t`.
    fn advance(&self, u: &SpectralField<T>, t: T, dt: T, forcing: Forcing<'_, T>) -> Result<SpectralField<T>> {
        let nonlinear = self.drift(u, t, forcing)?;
        let coeffs = u
            .coeffs()
            .iter()
            .zip(&nonlinear)
            .zip(self.basis.eigenvalues())
            .map(|((&c, &f), &lambda)| {
                if self.cfg.laplacian {
                    let z = -lambda * dt;
                    z.exp() * c + dt * phi1(z) * f
                } else {
                    c + dt * f
                }
            })
            .collect();
        Ok(SpectralField::from_raw(coeffs))
    }

    /// Adds `ε H(u⁻; z_i)` for one event.
    fn apply_jump(&self, u: &mut SpectralField<T>, event: &JumpEvent<T>) -> Result<()> {
        let h = self.jump_h(u, event.atom)?;
        let size = self.cfg.noise_scale() * T::from_usize_lossy(event.multiplicity as usize);
        u.axpy(size, &h);
        Ok(())
    }

    /// One window `(t, t + dt]` of the uncontrolled equation. Jumps inside the
    /// window split it at their event times; each adds `ε H(u⁻; z_i)`.
    pub fn step(&self, u: &SpectralField<T>, t: T, dt: T, jumps: &[JumpEvent<T>]) -> Result<SpectralField<T>> {
        if !(dt > T::zero()) || dt > self.cfg.max_step {
            return Err(Error::param("step size must lie in (0, max step]"));
        }
        let end = t + dt;
        let mut state = u.resize(self.level());
        let mut now = t;
        let mut sorted: Vec<&JumpEvent<T>> = jumps.iter().collect();
        sorted.sort_by(|a, b| a.time.partial_cmp(&b.time).expect("finite times"));
        for ev in sorted {
            if !(ev.time > t && ev.time <= end) {
                return Err(Error::param(format!("jump at t = {} outside the step window", ev.time)));
            }
            if ev.time > now {
                state = self.advance(&state, now, ev.time - now, Forcing::Sde)?;
                now = ev.time;
            }
            self.apply_jump(&mut state, ev)?;
        }
        if end > now {
            state = self.advance(&state, now, end - now, Forcing::Sde)?;
        }
        check_state(&state, end, &[])?;
        Ok(state)
    }

    /// Marches `grid` from `u0`; `events` must be sorted and lie on the grid.
    pub fn integrate(
        &self,
        grid: &[T],
        events: &[JumpEvent<T>],
        forcing: Forcing<'_, T>,
    ) -> Result<TrajectorySample<T>> {
        if grid.first() != Some(&T::zero()) || grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::param("time grid must start at 0 and increase strictly"));
        }
        let mut states = Vec::with_capacity(grid.len());
        let mut flags = Vec::with_capacity(grid.len());
        let mut norms = Vec::with_capacity(NORM_HISTORY);
        let mut u = self.u0.clone();
        states.push(u.clone());
        flags.push(false);
        let mut next = 0;
        for w in grid.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            u = self.advance(&u, t0, t1 - t0, forcing)?;
            let mut jumped = false;
            while next < events.len() && events[next].time <= t1 {
                if events[next].time < t1 {
                    return Err(Error::param("jump time missing from the time grid"));
                }
                self.apply_jump(&mut u, &events[next])?;
                jumped = true;
                next += 1;
            }
            if norms.len() == NORM_HISTORY {
                norms.remove(0);
            }
            norms.push(u.l2_norm().as_f64());
            check_state(&u, t1, &norms)?;
            states.push(u.clone());
            flags.push(jumped);
        }
        if next < events.len() {
            return Err(Error::param("jump events beyond the time grid"));
        }
        Ok(TrajectorySample::from_parts(grid.to_vec(), states, flags))
    }

    /// Jump times of the PRM `N^{ε⁻¹}` (or `N` when unscaled) for `seed`.
    /// A zero noise coefficient has no jumps to resolve, so none are drawn.
    pub fn sample_jumps(&self, seed: u64) -> Result<Vec<JumpEvent<T>>> {
        if self.cfg.noise.is_zero() {
            return Ok(Vec::new());
        }
        let rate = T::one() / self.cfg.noise_scale();
        sample_prm(&self.cfg.marks, self.cfg.horizon, rate, seed)
    }

    /// Uniform grid merged with the given event times and extra breakpoints.
    pub fn grid_for(&self, events: &[JumpEvent<T>], extra: &[T]) -> Vec<T> {
        build_grid(
            self.cfg.horizon,
            self.cfg.max_step,
            events.iter().map(|e| e.time).chain(extra.iter().copied()),
        )
    }

    pub fn simulate(&self, seed: u64) -> Result<TrajectorySample<T>> {
        let events = self.sample_jumps(seed)?;
        self.simulate_with_events(&events)
    }

    /// Path driven by a prescribed, time-sorted list of events.
    pub fn simulate_with_events(&self, events: &[JumpEvent<T>]) -> Result<TrajectorySample<T>> {
        let grid = self.grid_for(events, &[]);
        self.integrate(&grid, events, Forcing::Sde)
    }

    pub fn simulate_controlled(&self, phi: &Control<T>, seed: u64) -> Result<TrajectorySample<T>> {
        phi.check_shape(self.cfg.marks.len(), self.cfg.horizon)?;
        let events = if self.cfg.noise.is_zero() {
            Vec::new()
        } else {
            let rate = T::one() / self.cfg.noise_scale();
            sample_controlled_prm(&self.cfg.marks, self.cfg.horizon, rate, phi, seed)?
        };
        let grid = self.grid_for(&events, &control_jumps(phi));
        self.integrate(&grid, &events, Forcing::Controlled(phi))
    }
}

/// Cell boundaries across which some atom's control value changes.
pub fn control_jumps<T: Real>(phi: &Control<T>) -> Vec<T> {
    let width = phi.cell_width();
    (1..phi.cells())
        .filter(|&k| (0..phi.atoms()).any(|i| phi.value(k, i) != phi.value(k - 1, i)))
        .map(|k| width * T::from_usize_lossy(k))
        .collect()
}

fn check_state<T: Real>(u: &SpectralField<T>, t: T, norms: &[f64]) -> Result<()> {
    let norm = u.l2_norm().as_f64();
    if !u.is_finite() || !norm.is_finite() || norm > BLOW_UP_NORM {
        let mut history = norms.to_vec();
        if history.last() != Some(&norm) {
            history.push(norm);
        }
        return Err(Error::BlowUp {
            time: t.as_f64(),
            norm_history: history,
        });
    }
    Ok(())
}

/// `T_p = ln(p / (p − 1 + θ))`.
pub fn moment_horizon(p: f64, theta: f64) -> f64 {
    (p / (p - 1.0 + theta)).ln()
}
