use nalgebra::Matrix3;
use num_complex::Complex64;

use super::{c, CMat3, CVec3, HLine, HPoint};
use crate::error::{GeometryError, Result};
use crate::tolerance::Tolerance;

/// A conic given by a symmetric 3x3 matrix, stored as its six independent
/// entries `(m00, m11, m22, m12, m02, m01)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conic {
    entries: [Complex64; 6],
}

impl Conic {
    /// Symmetric part of `m`. Fails when it vanishes.
    pub fn from_matrix(m: &CMat3) -> Result<Self> {
        let h = |i: usize, j: usize| (m[(i, j)] + m[(j, i)]) * 0.5;
        let entries = [h(0, 0), h(1, 1), h(2, 2), h(1, 2), h(0, 2), h(0, 1)];
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())
            || entries.iter().all(|z| z.norm() == 0.0)
        {
            return Err(GeometryError::ZeroVector);
        }
        Ok(Self { entries })
    }

    pub fn from_real_matrix(m: &Matrix3<f64>) -> Result<Self> {
        Self::from_matrix(&m.map(c))
    }

    /// From the polynomial `xx x^2 + yy y^2 + zz z^2 + yz yz + zx zx + xy xy`.
    pub fn from_coefficients(xx: f64, yy: f64, zz: f64, yz: f64, zx: f64, xy: f64) -> Result<Self> {
        #[rustfmt::skip]
        let m = Matrix3::new(
            xx,       xy / 2.0, zx / 2.0,
            xy / 2.0, yy,       yz / 2.0,
            zx / 2.0, yz / 2.0, zz,
        );
        Self::from_real_matrix(&m)
    }

    pub fn matrix(&self) -> CMat3 {
        let [a, b, cc, yz, zx, xy] = self.entries;
        CMat3::new(a, xy, zx, xy, b, yz, zx, yz, cc)
    }

    /// Real parts of the matrix.
    pub fn real_matrix(&self) -> Matrix3<f64> {
        self.matrix().map(|z| z.re)
    }

    /// Polynomial coefficients `(xx, yy, zz, yz, zx, xy)`.
    pub fn coefficients(&self) -> [Complex64; 6] {
        let [a, b, cc, yz, zx, xy] = self.entries;
        [a, b, cc, yz * 2.0, zx * 2.0, xy * 2.0]
    }

    /// Largest entry magnitude.
    pub fn scale(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `v^T m v` for an arbitrary representative.
    pub fn eval(&self, v: &CVec3) -> Complex64 {
        v.dot(&(self.matrix() * v))
    }

    /// Bilinear form `u^T m v`.
    pub fn bilinear(&self, u: &CVec3, v: &CVec3) -> Complex64 {
        u.dot(&(self.matrix() * v))
    }

    pub fn is_real(&self, tol: &Tolerance) -> bool {
        let s = self.scale();
        self.entries.iter().all(|z| z.im.abs() <= tol.eps * s)
    }

    /// Projective equality of the coefficient 6-vectors.
    pub fn proj_eq(&self, other: &Conic, tol: &Tolerance) -> bool {
        let (sa, sb) = (self.scale(), other.scale());
        let k = (0..6)
            .max_by(|&i, &j| {
                self.entries[i]
                    .norm()
                    .partial_cmp(&self.entries[j].norm())
                    .unwrap()
            })
            .unwrap();
        if other.entries[k].norm() <= tol.abs_floor * sb {
            return false;
        }
        let ratio = self.entries[k] / other.entries[k];
        self.entries.iter().zip(other.entries.iter()).all(|(a, b)| {
            let a = a / sa;
            let b = b * ratio / sa;
            tol.close(a, b)
        })
    }

    /// `t * self`.
    pub fn scaled(&self, t: Complex64) -> Conic {
        Conic {
            entries: self.entries.map(|z| z * t),
        }
    }
}

/// Value of the quadratic form at the canonical representative of `p`.
pub fn conic_eval(conic: &Conic, p: &HPoint) -> Complex64 {
    conic.eval(p.coords())
}

/// `|v^T m v| <= abs_floor + eps * |m| * |v|^2`.
pub fn on_conic(conic: &Conic, p: &HPoint, tol: &Tolerance) -> bool {
    let v = p.coords();
    let val = conic.eval(v).norm();
    tol.negligible(val, conic.scale() * v.norm_squared())
}

/// Polar line of `p`, coefficient vector `m v`.
pub fn polar(conic: &Conic, p: &HPoint, tol: &Tolerance) -> Result<HLine> {
    let v = p.coords();
    let mv = conic.matrix() * v;
    if tol.negligible(mv.norm(), conic.scale() * v.norm()) {
        return Err(GeometryError::SingularPair);
    }
    HLine::new(mv)
}
