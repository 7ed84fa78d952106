use crate::control::Control;
use crate::error::{Error, Result};
use crate::noise::MarkSpace;
use crate::scalar::Real;

/// `x log x − x + 1`, equal to 1 at `x = 0`.
#[inline]
pub fn entropy_density<T: Real>(x: T) -> T {
    x.x_log_abs() - x + T::one()
}

/// `L_T(g) = Σ_cells Σ_atoms Δt · w_i · (g log g − g + 1)`.
pub fn entropy_lt<T: Real>(g: &Control<T>, marks: &MarkSpace<T>) -> Result<T> {
    if g.atoms() != marks.len() {
        return Err(Error::ControlClass(format!(
            "control has {} atoms, mark space has {}",
            g.atoms(),
            marks.len()
        )));
    }
    let width = g.cell_width();
    let mut total = T::zero();
    for (cell, row) in g.rows().enumerate() {
        for (atom, (&x, a)) in row.iter().zip(marks.atoms()).enumerate() {
            if !(x >= T::zero()) || !x.is_finite() {
                return Err(Error::InvalidControlValue {
                    cell,
                    atom,
                    value: x.as_f64(),
                });
            }
            total = total + width * a.weight * entropy_density(x);
        }
    }
    Ok(total)
}
