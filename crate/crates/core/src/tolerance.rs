use num_complex::Complex64;

use crate::error::{GeometryError, Result};

/// Magnitude-aware comparison policy shared by every predicate in the crate.
///
/// Two quantities `a`, `b` are considered equal when
/// `|a - b| <= abs_floor + eps * max(|a|, |b|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub eps: f64,
    pub abs_floor: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            eps: 1e-9,
            abs_floor: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(eps: f64, abs_floor: f64) -> Result<Self> {
        if !(abs_floor > 0.0 && abs_floor <= eps && eps < 1.0) {
            return Err(GeometryError::InvalidTolerance(format!(
                "need 0 < abs_floor <= eps < 1, got eps={eps}, abs_floor={abs_floor}"
            )));
        }
        Ok(Self { eps, abs_floor })
    }

    /// Mixed absolute/relative equality of two complex scalars.
    pub fn close(&self, a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= self.abs_floor + self.eps * a.norm().max(b.norm())
    }

    /// `value` is negligible compared with `scale`.
    pub fn negligible(&self, value: f64, scale: f64) -> bool {
        value.abs() <= self.abs_floor + self.eps * scale.abs()
    }

    /// Same tolerance with `eps` (and the floor) multiplied by `factor`.
    ///
    /// Used where a test quantity is the result of a longer computation chain
    /// than a single comparison.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            eps: (self.eps * factor).min(0.5),
            abs_floor: (self.abs_floor * factor).min(0.5),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inverted_bounds() {
        assert!(Tolerance::new(1e-12, 1e-9).is_err());
        assert!(Tolerance::new(1.5, 1e-12).is_err());
        assert!(Tolerance::new(1e-9, 0.0).is_err());
        assert!(Tolerance::new(1e-9, 1e-12).is_ok());
    }

    #[test]
    fn mixed_comparison_is_relative_for_large_values() {
        let tol = Tolerance::default();
        let a = Complex64::new(1e6, 0.0);
        assert!(tol.close(a, a + 1e-4));
        assert!(!tol.close(a, a + 1e-2));
        assert!(tol.close(Complex64::new(0.0, 0.0), Complex64::new(1e-13, 0.0)));
    }
}
