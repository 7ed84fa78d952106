use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// One atom `z_i` of the discretized mark space.
///
/// `weight` is `m({z_i})`; `h1` is the Lipschitz envelope and also the noise
/// amplitude `h(z_i)` multiplying every coefficient family; `h2 ≤ 1` is the
/// growth envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom<T> {
    pub weight: T,
    pub h1: T,
    pub h2: T,
}

impl<T: Real> Atom<T> {
    pub fn new(weight: T, h1: T, h2: T) -> Self {
        Self { weight, h1, h2 }
    }

    pub fn amplitude(&self) -> T {
        self.h1
    }
}

/// Finitely many weighted atoms standing in for `(E, m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkSpace<T> {
    atoms: Vec<Atom<T>>,
}

impl<T: Real> MarkSpace<T> {
    pub fn new(atoms: Vec<Atom<T>>) -> Result<Self> {
        for (i, a) in atoms.iter().enumerate() {
            if !(a.weight > T::zero()) || !a.weight.is_finite() {
                return Err(Error::param(format!("atom {i}: weight must be positive and finite")));
            }
            if !(a.h1 >= T::zero()) || !a.h1.is_finite() {
                return Err(Error::param(format!("atom {i}: h1 must be nonnegative and finite")));
            }
            if !(a.h2 >= T::zero() && a.h2 <= T::one()) {
                return Err(Error::param(format!(
                    "atom {i}: h2 = {} violates 0 <= h2 <= 1 (the Lipschitz ratio may not exceed 1)",
                    a.h2
                )));
            }
        }
        Ok(Self { atoms })
    }

    /// A single atom of unit weight.
    pub fn single(weight: T, h1: T, h2: T) -> Result<Self> {
        Self::new(vec![Atom::new(weight, h1, h2)])
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `m(E) = Σ w_i`.
    pub fn total_intensity(&self) -> T {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// `Σ w_i h(z_i) c_i` for per-atom factors `c_i`.
    pub fn weighted_amplitude<F: Fn(usize) -> T>(&self, factor: F) -> T {
        self.atoms
            .iter()
            .enumerate()
            .map(|(i, a)| a.weight * a.amplitude() * factor(i))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(MarkSpace::new(vec![Atom::new(1.0, 0.5, 0.5)]).is_ok());
        assert!(MarkSpace::new(vec![Atom::new(0.0, 0.5, 0.5)]).is_err());
        assert!(MarkSpace::new(vec![Atom::new(1.0, -0.5, 0.5)]).is_err());
        let err = MarkSpace::new(vec![Atom::new(1.0, 0.5, 1.5)]).unwrap_err();
        assert!(err.to_string().contains("h2"));
    }

    #[test]
    fn totals() {
        let ms = MarkSpace::new(vec![Atom::new(1.0, 0.5, 0.2), Atom::new(2.0, 1.0, 0.3)]).unwrap();
        assert_eq!(ms.total_intensity(), 3.0);
        assert_eq!(ms.weighted_amplitude(|_| 1.0), 2.5);
    }
}
