//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the solvers are generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `log(1 ∨ z)`.
    #[inline]
    fn log_plus(self) -> Self {
        if self > Self::one() {
            self.ln()
        } else {
            Self::zero()
        }
    }

    /// `x log|x|` continuously extended by 0 at the origin.
    #[inline]
    fn x_log_abs(self) -> Self {
        if self.abs() < Self::tiny() {
            Self::zero()
        } else {
            self * self.abs().ln()
        }
    }

    /// Magnitude below which `x log|x|` is treated as zero.
    #[inline]
    fn tiny() -> Self {
        // 1e-300 underflows in f32; fall back to its smallest normal.
        Self::from_f64(1e-300)
            .filter(|v| *v > Self::zero())
            .unwrap_or_else(Self::min_positive_value)
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_log_abs_vanishes_at_zero() {
        assert_eq!(0.0f64.x_log_abs(), 0.0);
        assert_eq!(1e-301f64.x_log_abs(), 0.0);
        assert_eq!(0.0f32.x_log_abs(), 0.0);
        assert!((std::f64::consts::E.x_log_abs() - std::f64::consts::E).abs() < 1e-15);
        assert!(((-2.0f64).x_log_abs() + 2.0 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn log_plus_clamps_below_one() {
        assert_eq!(0.5f64.log_plus(), 0.0);
        assert_eq!(1.0f64.log_plus(), 0.0);
        assert!((std::f64::consts::E.log_plus() - 1.0).abs() < 1e-15);
    }
}
