//! Piecewise-constant controls `g(t, z_i)` on a uniform time grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `g(t, z_i) = values[cell(t)][i]`, constant on `[k τ, (k+1) τ)` with
/// `τ = horizon / cells`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Control<T> {
    horizon: T,
    cells: usize,
    atoms: usize,
    values: Vec<T>,
}

impl<T: Real> Control<T> {
    /// Builds a control from one row of per-atom values per time cell.
    pub fn from_rows(horizon: T, rows: Vec<Vec<T>>) -> Result<Self> {
        if !(horizon > T::zero()) || !horizon.is_finite() {
            return Err(Error::param("control horizon must be positive"));
        }
        let cells = rows.len();
        if cells == 0 {
            return Err(Error::param("control needs at least one time cell"));
        }
        let atoms = rows[0].len();
        if atoms == 0 || rows.iter().any(|r| r.len() != atoms) {
            return Err(Error::param("control rows must share a positive atom count"));
        }
        let values: Vec<T> = rows.into_iter().flatten().collect();
        for (k, &v) in values.iter().enumerate() {
            if !(v >= T::zero()) || !v.is_finite() {
                return Err(Error::InvalidControlValue {
                    cell: k / atoms,
                    atom: k % atoms,
                    value: v.as_f64(),
                });
            }
        }
        Ok(Self {
            horizon,
            cells,
            atoms,
            values,
        })
    }

    pub fn constant(horizon: T, cells: usize, atoms: usize, value: T) -> Result<Self> {
        Self::from_rows(horizon, vec![vec![value; atoms]; cells])
    }

    /// Builds from a flat row-major vector (`cells × atoms`).
    pub fn from_flat(horizon: T, cells: usize, atoms: usize, values: Vec<T>) -> Result<Self> {
        if values.len() != cells * atoms {
            return Err(Error::param("flat control has wrong length"));
        }
        let rows = if atoms == 0 {
            Vec::new()
        } else {
            values.chunks(atoms).map(|c| c.to_vec()).collect()
        };
        Self::from_rows(horizon, rows)
    }

    pub fn horizon(&self) -> T {
        self.horizon
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn cell_width(&self) -> T {
        self.horizon / T::from_usize_lossy(self.cells)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.values.chunks(self.atoms)
    }

    pub fn value(&self, cell: usize, atom: usize) -> T {
        self.values[cell * self.atoms + atom]
    }

    /// Cell containing `t`; times at or past the horizon map to the last cell.
    pub fn cell_of(&self, t: T) -> usize {
        let k = (t / self.cell_width()).floor().to_usize().unwrap_or(0);
        k.min(self.cells - 1)
    }

    pub fn value_at(&self, t: T, atom: usize) -> T {
        self.value(self.cell_of(t), atom)
    }

    /// `sup_t g(t, z_i)`.
    pub fn sup_for_atom(&self, atom: usize) -> T {
        (0..self.cells)
            .map(|k| self.value(k, atom))
            .fold(T::zero(), T::max)
    }

    /// Interior cell boundaries `τ, 2τ, …, (cells−1)τ`.
    pub fn breakpoints(&self) -> Vec<T> {
        let w = self.cell_width();
        (1..self.cells).map(|k| w * T::from_usize_lossy(k)).collect()
    }

    /// Whether every value lies in `[1/n, n]`.
    pub fn in_bounded_class(&self, n: T) -> bool {
        let lo = n.recip();
        self.values.iter().all(|&v| v >= lo && v <= n)
    }

    pub fn is_identity(&self) -> bool {
        self.values.iter().all(|&v| v == T::one())
    }

    pub(crate) fn check_shape(&self, atoms: usize, horizon: T) -> Result<()> {
        if self.atoms != atoms {
            return Err(Error::ControlClass(format!(
                "control has {} atoms, mark space has {atoms}",
                self.atoms
            )));
        }
        if (self.horizon - horizon).abs() > T::lit(1e-12) * horizon.abs() {
            return Err(Error::ControlClass(format!(
                "control horizon {} differs from {horizon}",
                self.horizon
            )));
        }
        Ok(())
    }
}
