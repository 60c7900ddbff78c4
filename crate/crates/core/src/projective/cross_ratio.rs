use num_complex::Complex64;

use super::{det3, projective_distance, CVec3, HLine, HPoint};
use crate::error::{GeometryError, Result};
use crate::tolerance::Tolerance;

/// Cross ratio of four elements of a range (or, dually, a pencil).
///
/// With brackets `[x, y] = det(o, x, y)` for any `o` off the carrier, the
/// value is `[a,c][b,d] / ([a,d][b,c])`, which equals
/// `(t_a - t_c)(t_b - t_d) / ((t_a - t_d)(t_b - t_c))` for every affine
/// parameterization `x = u + t v` of the carrier.
fn cross_ratio_vectors(v: [&CVec3; 4], tol: &Tolerance) -> Result<Complex64> {
    let unit: Vec<CVec3> = v.iter().map(|x| *x / Complex64::from(x.norm())).collect();
    if unit.iter().any(|x| !x.iter().all(|z| z.re.is_finite() && z.im.is_finite())) {
        return Err(GeometryError::ZeroVector);
    }
    if projective_distance(&unit[0], &unit[1]) <= tol.eps
        || projective_distance(&unit[2], &unit[3]) <= tol.eps
    {
        return Err(GeometryError::DegenerateQuadruple);
    }
    let mut best = (0, 1, 0.0);
    for i in 0..4 {
        for j in i + 1..4 {
            let d = projective_distance(&unit[i], &unit[j]);
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    let carrier = unit[best.0].cross(&unit[best.1]);
    let carrier = carrier / Complex64::from(carrier.norm());
    if unit.iter().any(|x| carrier.dot(x).norm() > tol.eps.sqrt() * 1e-2) {
        return Err(GeometryError::NotCoincident);
    }
    let o = carrier.map(|z| z.conj());
    let br = |x: usize, y: usize| det3(&o, &unit[x], &unit[y]);
    let num = br(0, 2) * br(1, 3);
    let den = br(0, 3) * br(1, 2);
    if den.norm() <= tol.abs_floor.max(tol.eps * tol.eps) {
        return Err(GeometryError::DegenerateQuadruple);
    }
    Ok(num / den)
}

/// Cross ratio `(a, b; c, d)` of four collinear points.
pub fn cross_ratio_points(
    a: &HPoint,
    b: &HPoint,
    c: &HPoint,
    d: &HPoint,
    tol: &Tolerance,
) -> Result<Complex64> {
    cross_ratio_vectors([a.coords(), b.coords(), c.coords(), d.coords()], tol)
}

/// Cross ratio `(a, b; c, d)` of four concurrent lines.
pub fn cross_ratio_lines(
    a: &HLine,
    b: &HLine,
    c: &HLine,
    d: &HLine,
    tol: &Tolerance,
) -> Result<Complex64> {
    cross_ratio_vectors([a.coords(), b.coords(), c.coords(), d.coords()], tol)
}
