//! Intersection of two conics through a degenerate member of their pencil.

use num_complex::Complex64;

use super::{c, canonicalize, null_basis, pivot_index, projective_distance, CMat3, CVec3, Conic, HPoint};
use crate::error::{GeometryError, Result};
use crate::tolerance::Tolerance;

/// One intersection point of two conics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intersection {
    pub point: HPoint,
    /// Intersection multiplicity (1..=4); multiplicities of all returned
    /// points add up to 4.
    pub multiplicity: u8,
    pub real: bool,
}

/// Largest ratio sigma_3 / sigma_1 accepted for a degenerate pencil member.
const DEGENERATE_RATIO: f64 = 1e-6;
/// sigma_2 / sigma_1 below this means the degenerate member is a double line.
const DOUBLE_LINE_RATIO: f64 = 1e-7;

fn adjugate(m: &CMat3) -> CMat3 {
    let r0 = m.row(0).transpose();
    let r1 = m.row(1).transpose();
    let r2 = m.row(2).transpose();
    CMat3::from_columns(&[r1.cross(&r2), r2.cross(&r0), r0.cross(&r1)])
}

fn singular_values(m: &CMat3) -> [f64; 3] {
    let sv = m.svd(false, false).singular_values;
    let mut s = [sv[0], sv[1], sv[2]];
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

fn rank_ratio(m: &CMat3) -> f64 {
    let s = singular_values(m);
    if s[0] == 0.0 {
        0.0
    } else {
        s[2] / s[0]
    }
}

fn normalized(m: &CMat3) -> CMat3 {
    let s = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    m.map(|z| z / s)
}

/// Roots of `c0 + c1 t + c2 t^2 + c3 t^3`, lowering the degree when leading
/// coefficients vanish. Cardano with complex arithmetic, then two Newton
/// steps per root.
pub fn solve_cubic(coeffs: [Complex64; 4]) -> Vec<Complex64> {
    let scale = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let k: Vec<Complex64> = coeffs.iter().map(|z| z / scale).collect();
    let negligible = |z: Complex64| z.norm() <= 1e-14;
    let mut roots = if !negligible(k[3]) {
        let (a, b, cc) = (k[2] / k[3], k[1] / k[3], k[0] / k[3]);
        monic_cubic(a, b, cc).to_vec()
    } else if !negligible(k[2]) {
        quadratic_roots(k[2], k[1], k[0])
    } else if !negligible(k[1]) {
        vec![-k[0] / k[1]]
    } else {
        Vec::new()
    };
    let p = |t: Complex64| ((k[3] * t + k[2]) * t + k[1]) * t + k[0];
    let dp = |t: Complex64| (k[3] * 3.0 * t + k[2] * 2.0) * t + k[1];
    for r in roots.iter_mut() {
        for _ in 0..2 {
            let d = dp(*r);
            if d.norm() == 0.0 {
                break;
            }
            let next = *r - p(*r) / d;
            if next.re.is_finite() && next.im.is_finite() && p(next).norm() <= p(*r).norm() {
                *r = next;
            } else {
                break;
            }
        }
    }
    roots
}

fn quadratic_roots(a: Complex64, b: Complex64, cc: Complex64) -> Vec<Complex64> {
    // a t^2 + b t + c
    let disc = (b * b - a * cc * 4.0).sqrt();
    let w = if (b + disc).norm() >= (b - disc).norm() { b + disc } else { b - disc };
    if w.norm() == 0.0 {
        return vec![c(0.0), c(0.0)];
    }
    let q = -w * 0.5;
    vec![q / a, cc / q]
}

fn monic_cubic(a: Complex64, b: Complex64, cc: Complex64) -> [Complex64; 3] {
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = a * a * a * (2.0 / 27.0) - a * b / 3.0 + cc;
    let s = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let u1 = -q / 2.0 + s;
    let u2 = -q / 2.0 - s;
    let u = if u1.norm() >= u2.norm() { u1 } else { u2 };
    if u.norm() == 0.0 {
        return [-shift; 3];
    }
    let cube = u.powf(1.0 / 3.0);
    let omega = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
    let mut out = [c(0.0); 3];
    let mut w = c(1.0);
    for slot in out.iter_mut() {
        let cw = cube * w;
        *slot = cw - p / (cw * 3.0) - shift;
        w *= omega;
    }
    out
}

/// Roots `(s : t)` of `a s^2 + 2 b s t + c t^2`; `None` when the form vanishes.
pub(crate) fn homogeneous_quadratic(
    a: Complex64,
    b: Complex64,
    cc: Complex64,
) -> Option<[(Complex64, Complex64); 2]> {
    let scale = a.norm().max(b.norm()).max(cc.norm());
    if scale == 0.0 {
        return None;
    }
    let (a, b, cc) = (a / scale, b / scale, cc / scale);
    let r = (b * b - a * cc).sqrt();
    let w = if (b + r).norm() >= (b - r).norm() { b + r } else { b - r };
    if w.norm() == 0.0 {
        return if a.norm() > 0.0 {
            Some([(c(0.0), c(1.0)); 2])
        } else {
            Some([(c(1.0), c(0.0)); 2])
        };
    }
    let q = -w;
    Some([(q, a), (cc, q)])
}

/// Intersections of a line (coefficient vector) with a conic matrix.
pub(crate) fn line_conic_points(line: &CVec3, m: &CMat3, tol: &Tolerance) -> Result<[CVec3; 2]> {
    let (b0, b1) = null_basis(line);
    let a = b0.dot(&(m * b0));
    let b = b0.dot(&(m * b1));
    let cc = b1.dot(&(m * b1));
    let mscale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let bscale = b0.norm().max(b1.norm()).powi(2);
    let fscale = a.norm().max(b.norm()).max(cc.norm());
    if tol.negligible(fscale, mscale * bscale) {
        return Err(GeometryError::SharedComponent);
    }
    let roots = homogeneous_quadratic(a, b, cc).ok_or(GeometryError::SharedComponent)?;
    Ok(roots.map(|(s, t)| b0 * s + b1 * t))
}

/// Splits a degenerate conic matrix into its two (possibly equal) lines.
fn split_degenerate(d: &CMat3, tol: &Tolerance) -> Result<[CVec3; 2]> {
    let s = singular_values(d);
    if s[1] <= DOUBLE_LINE_RATIO * s[0] {
        let row = (0..3)
            .map(|i| d.row(i).transpose())
            .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
            .unwrap();
        return Ok([row, row]);
    }
    let adj = adjugate(d);
    let vertex = (0..3)
        .map(|j| adj.column(j).into_owned())
        .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
        .unwrap();
    let probe_line = vertex.map(|z| z.conj());
    let [u1, u2] = line_conic_points(&probe_line, d, tol)?;
    Ok([vertex.cross(&u1), vertex.cross(&u2)])
}

fn polish(v: &CVec3, m1: &CMat3, m2: &CMat3) -> CVec3 {
    let k = pivot_index(v);
    let free: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    let mut x = v.map(|z| z / v[k]);
    let residual = |x: &CVec3| {
        (x.dot(&(m1 * x)).norm().powi(2) + x.dot(&(m2 * x)).norm().powi(2)).sqrt()
    };
    for _ in 0..3 {
        let f1 = x.dot(&(m1 * x));
        let f2 = x.dot(&(m2 * x));
        let g1 = (m1 * x) * c(2.0);
        let g2 = (m2 * x) * c(2.0);
        let (a11, a12, a21, a22) = (g1[free[0]], g1[free[1]], g2[free[0]], g2[free[1]]);
        let det = a11 * a22 - a12 * a21;
        if det.norm() < 1e-12 {
            break;
        }
        let dx0 = (a22 * f1 - a12 * f2) / det;
        let dx1 = (a11 * f2 - a21 * f1) / det;
        let mut next = x;
        next[free[0]] -= dx0;
        next[free[1]] -= dx1;
        if residual(&next) < residual(&x) {
            x = next;
        } else {
            break;
        }
    }
    x
}

/// All intersection points of two distinct conics, with multiplicities.
///
/// A degenerate member `m1 + t m2` of the pencil is located by solving
/// `det(m1 + t m2) = 0`; among the roots (and the two input conics
/// themselves) the member with the smallest `sigma_3 / sigma_1` is split into
/// two lines, which are then intersected with the more regular input conic.
pub fn conic_intersections(c1: &Conic, c2: &Conic, tol: &Tolerance) -> Result<Vec<Intersection>> {
    if c1.proj_eq(c2, tol) {
        return Err(GeometryError::IdenticalConics);
    }
    let m1 = normalized(&c1.matrix());
    let m2 = normalized(&c2.matrix());
    let (r1, r2) = (rank_ratio(&m1), rank_ratio(&m2));
    if r1.max(r2) <= DEGENERATE_RATIO {
        return Err(GeometryError::NoDegenerateMemberFound);
    }
    let base_is_first = r1 >= r2;
    let base = if base_is_first { m1 } else { m2 };

    let cubic = [
        m1.determinant(),
        (adjugate(&m1) * m2).trace(),
        (m1 * adjugate(&m2)).trace(),
        m2.determinant(),
    ];
    let mut candidates: Vec<CMat3> = solve_cubic(cubic)
        .into_iter()
        .filter(|t| t.re.is_finite() && t.im.is_finite())
        .map(|t| normalized(&(m1 + m2 * t)))
        .collect();
    candidates.push(if base_is_first { m2 } else { m1 });
    let degenerate = candidates
        .into_iter()
        .map(|m| (rank_ratio(&m), m))
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
        .filter(|(ratio, _)| *ratio <= DEGENERATE_RATIO)
        .map(|(_, m)| m)
        .ok_or(GeometryError::NoDegenerateMemberFound)?;

    let lines = split_degenerate(&degenerate, tol)?;
    let mut raw = Vec::with_capacity(4);
    for line in &lines {
        let pts = line_conic_points(line, &base, tol)?;
        raw.extend(pts);
    }

    let merge_dist = tol.eps.sqrt();
    let mut groups: Vec<Vec<CVec3>> = Vec::new();
    for v in raw {
        let v = canonicalize(&v).ok_or(GeometryError::NoDegenerateMemberFound)?;
        match groups
            .iter_mut()
            .find(|g| projective_distance(&g[0], &v) <= merge_dist)
        {
            Some(g) => g.push(v),
            None => groups.push(vec![v]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let k = pivot_index(&g[0]);
            let mean = g
                .iter()
                .map(|v| v.map(|z| z / v[k]))
                .fold(CVec3::zeros(), |acc, v| acc + v)
                / c(g.len() as f64);
            let refined = if g.len() == 1 { polish(&mean, &m1, &m2) } else { mean };
            let point = HPoint::new(refined)?;
            Ok(Intersection {
                real: point.is_real(tol),
                point,
                multiplicity: g.len() as u8,
            })
        })
        .collect()
}
