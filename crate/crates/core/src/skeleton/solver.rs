use rayon::prelude::*;
use serde::Serialize;

use crate::control::Control;
use crate::error::{Error, Result};
use crate::galerkin::{build_grid, control_jumps, Forcing, GalerkinSystem};
use crate::scalar::Real;
use crate::spectral::{path_metric, union_grid, TrajectorySample};

use super::entropy::entropy_lt;

fn check_control<T: Real>(system: &GalerkinSystem<T>, g: &Control<T>) -> Result<()> {
    let cfg = system.config();
    g.check_shape(cfg.marks.len(), cfg.horizon)
}

/// Uniform grid of the system refined at the control's switching times.
pub fn skeleton_grid<T: Real>(system: &GalerkinSystem<T>, g: &Control<T>) -> Vec<T> {
    let cfg = system.config();
    build_grid(cfg.horizon, cfg.max_step, control_jumps(g))
}

/// Solves the controlled skeleton ODE
/// `u' = Δu + P_n[u log|u|] + Σ_i w_i (g(t, z_i) − 1) P_n η(u; z_i)`
/// with the same exponential-Euler kernel as the SDE, on the system's grid.
pub fn solve_skeleton<T: Real>(system: &GalerkinSystem<T>, g: &Control<T>) -> Result<TrajectorySample<T>> {
    check_control(system, g)?;
    if system.config().max_step > g.cell_width() {
        return Err(Error::param("time step exceeds the control cell width"));
    }
    let grid = skeleton_grid(system, g);
    system.integrate(&grid, &[], Forcing::Skeleton(g))
}

/// As [`solve_skeleton`] on a caller-supplied grid (for comparisons against
/// SDE paths sampled on their own jump-adapted grids).
pub fn solve_skeleton_on_grid<T: Real>(
    system: &GalerkinSystem<T>,
    g: &Control<T>,
    grid: &[T],
) -> Result<TrajectorySample<T>> {
    check_control(system, g)?;
    system.integrate(grid, &[], Forcing::Skeleton(g))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundEntry {
    pub entropy: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniformBoundReport {
    pub level_set: f64,
    pub entries: Vec<BoundEntry>,
    /// Largest `sup_t ‖u_g‖² + ∫ ‖u_g‖²_{W₀^{1,2}}` over the set (0 if empty).
    pub max_energy: f64,
}

impl UniformBoundReport {
    pub fn is_bounded(&self) -> bool {
        self.max_energy.is_finite()
    }
}

/// Energy of every skeleton solution for controls in `S_N`. Controls outside
/// `S_N` are rejected; a blow-up is returned as an error.
pub fn uniform_bound_check<T: Real>(
    system: &GalerkinSystem<T>,
    controls: &[Control<T>],
    level_set: T,
) -> Result<UniformBoundReport> {
    let marks = &system.config().marks;
    let domain = &system.config().domain;
    let entries: Vec<Result<BoundEntry>> = controls
        .par_iter()
        .enumerate()
        .map(|(k, g)| {
            let entropy = entropy_lt(g, marks)?;
            if entropy > level_set {
                return Err(Error::ControlClass(format!(
                    "control {k} has L_T = {entropy} above N = {level_set}"
                )));
            }
            let path = solve_skeleton(system, g)?;
            Ok(BoundEntry {
                entropy: entropy.as_f64(),
                energy: path.energy(domain).as_f64(),
            })
        })
        .collect();
    let entries = entries.into_iter().collect::<Result<Vec<_>>>()?;
    let max_energy = entries.iter().map(|e| e.energy).fold(0.0, f64::max);
    Ok(UniformBoundReport {
        level_set: level_set.as_f64(),
        entries,
        max_energy,
    })
}

/// `ρ_T(u_{g_n}, u_g)` for each control in the sequence, both solved on the
/// union of their grids.
pub fn continuity_probe<T: Real>(
    system: &GalerkinSystem<T>,
    g: &Control<T>,
    sequence: &[Control<T>],
) -> Result<Vec<T>> {
    let horizon = system.config().horizon;
    let base_grid = skeleton_grid(system, g);
    sequence
        .par_iter()
        .map(|gn| {
            let grid = union_grid(&base_grid, &skeleton_grid(system, gn));
            let reference = solve_skeleton_on_grid(system, g, &grid)?;
            let perturbed = solve_skeleton_on_grid(system, gn, &grid)?;
            path_metric(&perturbed, &reference, T::zero(), horizon, &system.config().domain)
        })
        .collect()
}
