use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::control::Control;
use crate::error::Result;
use crate::noise::MarkSpace;
use crate::scalar::Real;

use super::entropy::entropy_lt;

/// Random piecewise-constant control with `L_T(g) ≤ level_set`.
///
/// Draws log-normal cell values `exp(s Z)` and halves the spread `s` until
/// the entropy fits.
pub fn random_control_in_level_set<T: Real, R: Rng>(
    rng: &mut R,
    horizon: T,
    cells: usize,
    marks: &MarkSpace<T>,
    level_set: T,
) -> Result<Control<T>> {
    let atoms = marks.len();
    let z: Vec<f64> = (0..cells * atoms).map(|_| StandardNormal.sample(rng)).collect();
    let mut spread = rng.random_range(0.2..2.0);
    loop {
        let values = z.iter().map(|&x| T::lit((spread * x).exp())).collect();
        let g = Control::from_flat(horizon, cells, atoms, values)?;
        if entropy_lt(&g, marks)? <= level_set {
            return Ok(g);
        }
        spread *= 0.5;
    }
}
