//! Homogeneous primitives over complex scalars.
//!
//! Points and lines are both complex 3-vectors up to a nonzero factor. They are
//! stored in canonical form: divided by their largest-magnitude component (first
//! one on ties), and, when the result is real, sign-flipped so that the real
//! part is lexicographically positive.

use std::fmt;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{GeometryError, Result};
use crate::tolerance::Tolerance;

mod conic;
mod cross_ratio;
mod pencil;

pub use conic::{conic_eval, on_conic, polar, Conic};
pub use cross_ratio::{cross_ratio_lines, cross_ratio_points};
pub use pencil::{conic_intersections, solve_cubic, Intersection};

/// Complex scalar used throughout the kernel.
pub type Scalar = Complex64;
/// Complex 3-vector.
pub type CVec3 = Vector3<Complex64>;
/// Complex 3x3 matrix.
pub type CMat3 = Matrix3<Complex64>;

/// Imaginary parts below this (relative to a unit pivot) count as zero when
/// choosing the sign of a canonical vector.
const CANON_REAL_THRESHOLD: f64 = 1e-12;
/// Relative slack when picking the pivot among near-equal magnitudes.
const PIVOT_TIE: f64 = 1e-9;

/// Lexicographic sign of a real triple.
pub fn chi(p: &[f64; 3]) -> i8 {
    for &x in p {
        if x > 0.0 {
            return 1;
        }
        if x < 0.0 {
            return -1;
        }
    }
    0
}

pub(crate) fn cvec(x: f64, y: f64, z: f64) -> CVec3 {
    CVec3::new(c(x), c(y), c(z))
}

pub(crate) fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub(crate) fn from_real(v: &Vector3<f64>) -> CVec3 {
    v.map(c)
}

fn pivot_index(v: &CVec3) -> usize {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    v.iter()
        .position(|z| z.norm() >= max * (1.0 - PIVOT_TIE))
        .unwrap_or(0)
}

pub(crate) fn canonicalize(v: &CVec3) -> Option<CVec3> {
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return None;
    }
    if v.iter().all(|z| z.norm() == 0.0) {
        return None;
    }
    let k = pivot_index(v);
    let pivot = v[k];
    let mut w = v.map(|z| z / pivot);
    w[k] = c(1.0);
    if w.iter().all(|z| z.im.abs() <= CANON_REAL_THRESHOLD) {
        let re = [w[0].re, w[1].re, w[2].re];
        if chi(&re) < 0 {
            w = -w;
        }
    }
    Some(w)
}

/// Sine of the angle between two complex lines through the origin:
/// `|u x v| / (|u| |v|)`. Zero iff the vectors are proportional.
pub fn projective_distance(u: &CVec3, v: &CVec3) -> f64 {
    let nu = u.norm();
    let nv = v.norm();
    if nu == 0.0 || nv == 0.0 {
        return f64::INFINITY;
    }
    u.cross(v).norm() / (nu * nv)
}

/// Projective equality under the mixed tolerance policy.
///
/// `v` is rescaled onto `u`'s canonical pivot before the componentwise
/// comparison, so nearly equal vectors whose canonical forms would pick
/// different pivots or signs still compare equal.
pub fn proj_eq_vec(u: &CVec3, v: &CVec3, tol: &Tolerance) -> bool {
    let (Some(cu), Some(cv)) = (canonicalize(u), canonicalize(v)) else {
        return false;
    };
    let k = pivot_index(&cu);
    if cv[k].norm() <= tol.abs_floor {
        return false;
    }
    let scaled = cv.map(|z| z * cu[k] / cv[k]);
    cu.iter().zip(scaled.iter()).all(|(a, b)| tol.close(*a, *b))
}

/// `det(a, b, c)` with the arguments as rows.
pub fn det3(a: &CVec3, b: &CVec3, c: &CVec3) -> Complex64 {
    a.dot(&b.cross(c))
}

/// Two independent vectors spanning `{x : l . x = 0}`.
pub(crate) fn null_basis(l: &CVec3) -> (CVec3, CVec3) {
    let k = pivot_index(l);
    let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    let mut basis = [CVec3::zeros(), CVec3::zeros()];
    for (slot, &j) in basis.iter_mut().zip(others.iter()) {
        slot[j] = c(1.0);
        slot[k] = -l[j] / l[k];
    }
    (basis[0], basis[1])
}

macro_rules! homogeneous {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct $name(CVec3);

        impl $name {
            /// Canonicalizes `v`; fails on the zero vector or non-finite input.
            pub fn new(v: CVec3) -> Result<Self> {
                canonicalize(&v).map(Self).ok_or(GeometryError::ZeroVector)
            }

            pub fn real(x: f64, y: f64, z: f64) -> Result<Self> {
                Self::new(cvec(x, y, z))
            }

            pub fn from_real(v: &Vector3<f64>) -> Result<Self> {
                Self::new(from_real(v))
            }

            /// Canonical coordinates.
            pub fn coords(&self) -> &CVec3 {
                &self.0
            }

            /// True when every imaginary part is below `eps` (the canonical
            /// vector has unit pivot, so this is relative to its magnitude).
            pub fn is_real(&self, tol: &Tolerance) -> bool {
                let mag = self.0.norm();
                self.0.iter().all(|z| z.im.abs() <= tol.eps * mag)
            }

            /// Real parts of the canonical coordinates.
            pub fn re(&self) -> Vector3<f64> {
                self.0.map(|z| z.re)
            }

            pub fn proj_eq(&self, other: &Self, tol: &Tolerance) -> bool {
                proj_eq_vec(&self.0, &other.0, tol)
            }

            pub fn distance(&self, other: &Self) -> f64 {
                projective_distance(&self.0, &other.0)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let parts: Vec<String> = self
                    .0
                    .iter()
                    .map(|z| {
                        if z.im == 0.0 {
                            format!("{}", z.re)
                        } else {
                            format!("{}{:+}i", z.re, z.im)
                        }
                    })
                    .collect();
                write!(f, "[{}]", parts.join(" : "))
            }
        }
    };
}

homogeneous!(
    /// A point of the complex projective plane.
    HPoint
);
homogeneous!(
    /// A line of the complex projective plane, given by the coefficients of
    /// its linear form.
    HLine
);

/// Line through two distinct points.
pub fn join(p: &HPoint, q: &HPoint, tol: &Tolerance) -> Result<HLine> {
    if p.proj_eq(q, tol) {
        return Err(GeometryError::CoincidentArguments);
    }
    HLine::new(p.coords().cross(q.coords())).map_err(|_| GeometryError::CoincidentArguments)
}

/// Intersection of two distinct lines.
pub fn meet(l: &HLine, m: &HLine, tol: &Tolerance) -> Result<HPoint> {
    if l.proj_eq(m, tol) {
        return Err(GeometryError::CoincidentArguments);
    }
    HPoint::new(l.coords().cross(m.coords())).map_err(|_| GeometryError::CoincidentArguments)
}

/// Normalized incidence residual `|l . p| / (|l| |p|)`.
pub fn incidence(l: &HLine, p: &HPoint) -> f64 {
    let v = l.coords().dot(p.coords()).norm();
    v / (l.coords().norm() * p.coords().norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn chi_examples() {
        assert_eq!(chi(&[0.0, 0.0, 0.0]), 0);
        assert_eq!(chi(&[0.0, -2.0, 7.0]), -1);
        assert_eq!(chi(&[1.0, -5.0, -9.0]), 1);
    }

    #[test]
    fn join_and_meet_of_axes() {
        let tol = Tolerance::default();
        let l = join(
            &HPoint::real(1.0, 0.0, 0.0).unwrap(),
            &HPoint::real(0.0, 1.0, 0.0).unwrap(),
            &tol,
        )
        .unwrap();
        assert_eq!(l, HLine::real(0.0, 0.0, 1.0).unwrap());
        let p = meet(
            &HLine::real(0.0, 0.0, 1.0).unwrap(),
            &HLine::real(0.0, 1.0, 0.0).unwrap(),
            &tol,
        )
        .unwrap();
        assert_eq!(p, HPoint::real(1.0, 0.0, 0.0).unwrap());
    }

    #[test]
    fn join_of_equal_points_fails() {
        let tol = Tolerance::default();
        let p = HPoint::real(1.0, 1.0, 1.0).unwrap();
        let q = HPoint::real(2.0, 2.0, 2.0).unwrap();
        assert_eq!(join(&p, &q, &tol), Err(GeometryError::CoincidentArguments));
    }

    #[test]
    fn zero_vector_rejected() {
        assert_eq!(HPoint::real(0.0, 0.0, 0.0), Err(GeometryError::ZeroVector));
        assert_eq!(HPoint::real(f64::NAN, 0.0, 1.0), Err(GeometryError::ZeroVector));
    }

    #[test]
    fn canonical_sign_for_real_vectors() {
        let p = HPoint::real(-1.0, 1.0, 0.0).unwrap();
        assert_eq!(p.re(), Vector3::new(1.0, -1.0, 0.0));
        let q = HPoint::real(0.0, -0.5, 1.0).unwrap();
        assert_eq!(q.re(), Vector3::new(0.0, 0.5, -1.0));
    }

    #[test]
    fn proj_eq_survives_pivot_ties() {
        let tol = Tolerance::default();
        let a = HPoint::real(1.0, 1.0 + 1e-13, 0.0).unwrap();
        let b = HPoint::real(1.0 + 1e-13, 1.0, 0.0).unwrap();
        assert!(a.proj_eq(&b, &tol));
        let small = HPoint::real(1e-17, -1.0, 0.3).unwrap();
        let flipped = HPoint::real(-1e-17, -1.0, 0.3).unwrap();
        assert!(small.proj_eq(&flipped, &tol));
    }

    fn cplx() -> impl Strategy<Value = Complex64> {
        (-5.0..5.0f64, -5.0..5.0f64).prop_map(|(a, b)| Complex64::new(a, b))
    }

    fn real3() -> impl Strategy<Value = CVec3> {
        prop::array::uniform3(-5.0..5.0f64).prop_map(|a| cvec(a[0], a[1], a[2]))
    }

    proptest! {
        #[test]
        fn canonicalization_is_idempotent(a in cplx(), b in cplx(), z in cplx()) {
            let v = CVec3::new(a, b, z);
            prop_assume!(v.norm() > 1e-6);
            let once = canonicalize(&v).unwrap();
            let twice = canonicalize(&once).unwrap();
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn canonicalization_is_scale_free(v in real3(), t in prop_oneof![-9.0..-0.1f64, 0.1..9.0f64]) {
            prop_assume!(v.norm() > 1e-3);
            let p = HPoint::new(v).unwrap();
            let q = HPoint::new(v * c(t)).unwrap();
            prop_assert!(p.proj_eq(&q, &Tolerance::default()));
        }

        #[test]
        fn meet_of_two_joins_recovers_point(p in real3(), q in real3(), r in real3()) {
            let tol = Tolerance::default();
            prop_assume!(det3(&p, &q, &r).norm() > 1e-2 * p.norm() * q.norm() * r.norm());
            let (p, q, r) = (HPoint::new(p).unwrap(), HPoint::new(q).unwrap(), HPoint::new(r).unwrap());
            let back = meet(&join(&p, &q, &tol).unwrap(), &join(&p, &r, &tol).unwrap(), &tol).unwrap();
            prop_assert!(back.proj_eq(&p, &tol), "{} vs {}", back, p);
        }

        #[test]
        fn join_contains_both_points(p in real3(), q in real3()) {
            let tol = Tolerance::default();
            prop_assume!(projective_distance(&p, &q) > 1e-3);
            let (p, q) = (HPoint::new(p).unwrap(), HPoint::new(q).unwrap());
            let l = join(&p, &q, &tol).unwrap();
            prop_assert!(incidence(&l, &p) < 1e-14);
            prop_assert!(incidence(&l, &q) < 1e-14);
        }
    }
}
