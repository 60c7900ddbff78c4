//! Reference frames, circumcircles, circle centers and circular points.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::cayley_klein::{
    classify_plane, classify_plane_with_lemoine, lemoine_circumcenter_map, normalize_point,
    NormalizedPoint, PlaneKind, PlaneStructure,
};
use crate::error::{GeometryError, Result};
use crate::projective::{join, meet, solve_cubic, CVec3, Conic, HLine, HPoint};
use crate::tolerance::Tolerance;

/// Reference triangle `ABC` of a plane together with its Lemoine point `K`,
/// circumcenter `O` and circumcircle.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceFrame {
    vertices: [NormalizedPoint; 3],
    structure: PlaneStructure,
    lemoine: HPoint,
    circumcenter: HPoint,
    circum: Conic,
}

fn k_form(k: &[f64; 3]) -> Conic {
    Conic::from_coefficients(0.0, 0.0, 0.0, k[0], k[1], k[2]).expect("nonzero k")
}

impl ReferenceFrame {
    fn assemble(structure: PlaneStructure, k: [f64; 3], o: [f64; 3]) -> Result<Self> {
        let vertices = [
            HPoint::real(1.0, 0.0, 0.0)?,
            HPoint::real(0.0, 1.0, 0.0)?,
            HPoint::real(0.0, 0.0, 1.0)?,
        ]
        .map(|p| normalize_point(&p, &structure));
        let [a, b, c] = vertices;
        Ok(Self {
            vertices: [a?, b?, c?],
            lemoine: HPoint::real(k[0], k[1], k[2])?,
            circumcenter: HPoint::real(o[0], o[1], o[2])?,
            circum: k_form(&k),
            structure,
        })
    }

    /// Elliptic or hyperbolic plane with absolute form
    /// `x^2 + y^2 + z^2 + 2 q_A yz + 2 q_B zx + 2 q_C xy`.
    pub fn regular(q: [f64; 3], tol: &Tolerance) -> Result<Self> {
        if q.iter().any(|x| tol.close(x.abs().into(), 1.0.into())) {
            return Err(GeometryError::DegenerateQ);
        }
        let phi = Conic::from_coefficients(1.0, 1.0, 1.0, 2.0 * q[0], 2.0 * q[1], 2.0 * q[2])?;
        let structure = classify_plane(&phi, None, tol)?;
        let k = q.map(|x| x - 1.0);
        Self::assemble(structure, k, lemoine_circumcenter_map(&k))
    }

    /// Metric-affine plane with absolute form `(x+y+z)^2` and circumcenter `o`.
    pub fn singular(o: &HPoint, tol: &Tolerance) -> Result<Self> {
        let phi = Conic::from_real_matrix(&Matrix3::repeat(1.0))?;
        let structure = classify_plane(&phi, Some(o), tol)?;
        let k = structure.k().expect("singular structure carries k");
        let ov = o.re();
        Self::assemble(structure, k, [ov[0], ov[1], ov[2]])
    }

    /// Metric-affine plane whose reference triangle has Lemoine point `k`.
    pub fn from_lemoine(k: [f64; 3], tol: &Tolerance) -> Result<Self> {
        let structure = classify_plane_with_lemoine(k, tol)?;
        Self::assemble(structure, k, lemoine_circumcenter_map(&k))
    }

    pub fn vertices(&self) -> &[NormalizedPoint; 3] {
        &self.vertices
    }

    pub fn structure(&self) -> &PlaneStructure {
        &self.structure
    }

    pub fn kind(&self) -> PlaneKind {
        self.structure.kind()
    }

    pub fn tol(&self) -> &Tolerance {
        self.structure.tol()
    }

    pub fn lemoine(&self) -> &HPoint {
        &self.lemoine
    }

    pub fn circumcenter(&self) -> &HPoint {
        &self.circumcenter
    }

    pub fn circum(&self) -> &Conic {
        &self.circum
    }

    /// `k` of the circumcircle `k1 yz + k2 zx + k3 xy` (for regular planes
    /// `q - 1`).
    pub fn k(&self) -> [f64; 3] {
        let v = self.lemoine.re();
        match self.structure.k() {
            Some(k) => k,
            None => [v[0], v[1], v[2]],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleWithCenter {
    pub conic: Conic,
    pub center: HPoint,
}

/// `(p, q, r)` with `conic ~ k1 yz + k2 zx + k3 xy + (px + qy + rz)(x + y + z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleDecomposition {
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

fn collinear(vs: [&Vector3<f64>; 3], tol: &Tolerance) -> bool {
    let m = Matrix3::from_columns(&[*vs[0], *vs[1], *vs[2]]);
    tol.negligible(m.determinant(), vs.iter().map(|v| v.norm()).product())
}

fn require_finite(p: &HPoint, tol: &Tolerance) -> Result<Vector3<f64>> {
    if !p.is_real(tol) {
        return Err(GeometryError::ComplexPoint);
    }
    let v = p.re();
    if tol.negligible(v.sum(), v.abs().sum()) {
        return Err(GeometryError::IsotropicPoint);
    }
    Ok(v)
}

/// Circle through three points, without locating its center.
///
/// Regular planes: with `R°, S°, T°` normalized and `s` their common sign
/// class, the circle in `(R, S, T)`-barycentrics is
/// `(q'_A - 1) y'z' + (q'_B - 1) z'x' + (q'_C - 1) x'y'` with
/// `q'_A = s b(S°, T°)` and cyclically. Metric-affine planes solve for the
/// radical-axis part `(p, q, r)`.
pub fn circumconic_through(r: &HPoint, s: &HPoint, t: &HPoint, frame: &ReferenceFrame) -> Result<Conic> {
    let st = frame.structure();
    let tol = st.tol();
    if let Some(k) = st.k() {
        let pts = [require_finite(r, tol)?, require_finite(s, tol)?, require_finite(t, tol)?];
        if collinear([&pts[0], &pts[1], &pts[2]], tol) {
            return Err(GeometryError::CollinearVertices);
        }
        let kf = |x: &Vector3<f64>| k[0] * x[1] * x[2] + k[1] * x[2] * x[0] + k[2] * x[0] * x[1];
        let rows: Vec<Vector3<f64>> = pts.iter().map(|x| x * x.sum()).collect();
        let m = Matrix3::from_rows(&[rows[0].transpose(), rows[1].transpose(), rows[2].transpose()]);
        let rhs = Vector3::new(-kf(&pts[0]), -kf(&pts[1]), -kf(&pts[2]));
        let pqr = m.lu().solve(&rhs).ok_or(GeometryError::SingularSystem)?;
        if !pqr.iter().all(|x| x.is_finite()) {
            return Err(GeometryError::SingularSystem);
        }
        return Ok(assemble_decomposed(&k, &pqr));
    }
    let n = [normalize_point(r, st)?, normalize_point(s, st)?, normalize_point(t, st)?];
    if n.iter().any(|x| x.sign_class != n[0].sign_class) {
        return Err(GeometryError::MixedCongruenceClasses);
    }
    if collinear([&n[0].v, &n[1].v, &n[2].v], tol) {
        return Err(GeometryError::CollinearVertices);
    }
    let sign = n[0].sign_class as f64;
    let qa = sign * st.bilinear(&n[1].v, &n[2].v);
    let qb = sign * st.bilinear(&n[2].v, &n[0].v);
    let qc = sign * st.bilinear(&n[0].v, &n[1].v);
    let local = Conic::from_coefficients(0.0, 0.0, 0.0, qa - 1.0, qb - 1.0, qc - 1.0)?.real_matrix();
    let basis = Matrix3::from_columns(&[n[0].v, n[1].v, n[2].v]);
    let inv = basis.try_inverse().ok_or(GeometryError::CollinearVertices)?;
    Conic::from_real_matrix(&(inv.transpose() * local * inv))
}

fn assemble_decomposed(k: &[f64; 3], pqr: &Vector3<f64>) -> Conic {
    let (p, q, r) = (pqr[0], pqr[1], pqr[2]);
    Conic::from_coefficients(p, q, r, k[0] + q + r, k[1] + r + p, k[2] + p + q).expect("nonzero k")
}

/// Circumcircle of three points with its center.
pub fn circumcircle_through(
    r: &HPoint,
    s: &HPoint,
    t: &HPoint,
    frame: &ReferenceFrame,
) -> Result<CircleWithCenter> {
    let conic = circumconic_through(r, s, t, frame)?;
    let center = circle_center(&conic, frame.structure())?;
    Ok(CircleWithCenter { conic, center })
}

fn real_matrix_of(c: &Conic, tol: &Tolerance) -> Result<Matrix3<f64>> {
    if !c.is_real(tol) {
        return Err(GeometryError::NotACircle);
    }
    let m = c.real_matrix();
    Ok(m / m.amax())
}

fn singular_ratio(m: &Matrix3<f64>) -> (f64, f64) {
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    (sv[1] / sv[0], sv[2] / sv[0])
}

/// Tolerance for rank decisions on matrices produced by a short chain of
/// floating-point operations.
const RANK_RATIO: f64 = 1e-7;

/// Center of a circle: the pole, with respect to the circle, of its symmetry
/// line (regular planes) or of the line at infinity (metric-affine planes).
///
/// In a regular plane every circle is `L L^T - c phi`; the center is the pole
/// `phi^-1 L` of `L`, found from the double root `-c` of `det(m - t phi)`.
pub fn circle_center(conic: &Conic, s: &PlaneStructure) -> Result<HPoint> {
    let tol = s.tol();
    let m = real_matrix_of(conic, tol)?;
    if singular_ratio(&m).1 <= RANK_RATIO {
        return Err(GeometryError::NotACircle);
    }
    if let Some(k) = s.k() {
        decompose(&m, &k, tol)?;
        let z = m
            .lu()
            .solve(&Vector3::repeat(1.0))
            .ok_or(GeometryError::NotACircle)?;
        if tol.negligible(z.sum(), z.abs().sum()) {
            return Err(GeometryError::NoAnisotropicCenter);
        }
        return HPoint::from_real(&z);
    }
    let phi = s.phi_matrix() / s.phi_matrix().amax();
    let cm = m.map(Complex64::from);
    let cp = (-phi).map(Complex64::from);
    let adj = |x: &Matrix3<Complex64>| x.try_inverse().map(|i| i * x.determinant());
    let cubic = [
        cm.determinant(),
        adj(&cm).map(|a| (a * cp).trace()).unwrap_or_default(),
        adj(&cp).map(|a| (cm * a).trace()).unwrap_or_default(),
        cp.determinant(),
    ];
    let roots = solve_cubic(cubic);
    if roots.len() < 3 {
        return Err(GeometryError::NotACircle);
    }
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let &(i, j) = pairs
        .iter()
        .min_by(|a, b| {
            let da = (roots[a.0] - roots[a.1]).norm();
            let db = (roots[b.0] - roots[b.1]).norm();
            da.partial_cmp(&db).unwrap()
        })
        .unwrap();
    let lambda = ((roots[i] + roots[j]) * 0.5).re;
    let rank_one = m - phi * lambda;
    let (r2, _) = singular_ratio(&rank_one);
    if r2.is_nan() || r2 > RANK_RATIO {
        return Err(GeometryError::NotACircle);
    }
    let simple = roots[3 - i - j].re;
    let pencil = m - phi * simple;
    let rows = [pencil.row(0).transpose(), pencil.row(1).transpose(), pencil.row(2).transpose()];
    let center = [rows[1].cross(&rows[2]), rows[2].cross(&rows[0]), rows[0].cross(&rows[1])]
        .into_iter()
        .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
        .unwrap();
    if tol.negligible(center.norm(), pencil.amax().powi(2)) {
        return Err(GeometryError::NoAnisotropicCenter);
    }
    if s.is_isotropic(&center) {
        return Err(GeometryError::NoAnisotropicCenter);
    }
    HPoint::from_real(&center)
}

/// Circular points of a metric-affine frame: the intersections of the
/// circumcircle with the line at infinity.
pub fn circular_points(frame: &ReferenceFrame) -> Result<(HPoint, HPoint)> {
    let s = frame.structure();
    let k = s.k().ok_or(GeometryError::WrongPlaneKind {
        expected: "metric-affine",
    })?;
    let top = (0..3)
        .max_by(|&a, &b| k[a].abs().partial_cmp(&k[b].abs()).unwrap())
        .unwrap();
    // rotated coordinates x'_i = x_{(i + shift) mod 3} put the largest k last
    let shift = (top + 1) % 3;
    let idx = |i: usize| (i + shift) % 3;
    let (k1, k2, k3) = (k[idx(0)], k[idx(1)], k[idx(2)]);
    let rho = if s.kind() == PlaneKind::Galilean {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::from(crate::cayley_klein::rho_squared(&k)).sqrt()
    };
    let build = |r: Complex64| -> Result<HPoint> {
        let local = [r - k1 + k2 - k3, -r + k1 - k2 - k3, Complex64::from(2.0 * k3)];
        let mut v = CVec3::zeros();
        for (i, x) in local.iter().enumerate() {
            v[idx(i)] = *x;
        }
        HPoint::new(v)
    };
    Ok((build(rho)?, build(-rho)?))
}

/// Radical line at `v` of the circles `(v, p1, p2)` and `(v, p3, p4)`:
/// the join of `v` with the meet of the lines `[v° - p1°][v° - p2°]` and
/// `[v° - p3°][v° - p4°]`.
pub fn radical_line_at_vertex(
    v: &NormalizedPoint,
    p: [&NormalizedPoint; 4],
    tol: &Tolerance,
) -> Result<HLine> {
    let degenerate = |what: &str| GeometryError::DegenerateConstruction(what.into());
    let diff = |x: &NormalizedPoint| HPoint::from_real(&(v.v - x.v)).map_err(|_| degenerate("vertex repeated"));
    let l1 = join(&diff(p[0])?, &diff(p[1])?, tol).map_err(|_| degenerate("first chord line undefined"))?;
    let l2 = join(&diff(p[2])?, &diff(p[3])?, tol).map_err(|_| degenerate("second chord line undefined"))?;
    let x = meet(&l1, &l2, tol).map_err(|_| degenerate("circles coincide"))?;
    join(&x, &v.point(), tol).map_err(|_| degenerate("chord lines meet at the vertex"))
}

fn decompose(m: &Matrix3<f64>, k: &[f64; 3], tol: &Tolerance) -> Result<Vector3<f64>> {
    let (xx, yy, zz) = (m[(0, 0)], m[(1, 1)], m[(2, 2)]);
    let (yz, zx, xy) = (2.0 * m[(1, 2)], 2.0 * m[(0, 2)], 2.0 * m[(0, 1)]);
    let w = Vector3::new(yz - yy - zz, zx - xx - zz, xy - xx - yy);
    let kv = Vector3::from(*k);
    if tol.negligible(w.norm(), m.amax()) {
        return Err(GeometryError::NotACircle);
    }
    let lambda = kv.dot(&w) / w.norm_squared();
    let residual = (w * lambda - kv).norm();
    if !tol.scaled(1e3).negligible(residual, kv.norm()) {
        return Err(GeometryError::NotACircle);
    }
    Ok(Vector3::new(xx, yy, zz) * lambda)
}

/// Splits a circle of a metric-affine plane into the circumcircle part and
/// its radical axis `px + qy + rz = 0` with the circumcircle.
pub fn circle_decomposition(conic: &Conic, frame: &ReferenceFrame) -> Result<CircleDecomposition> {
    let s = frame.structure();
    let k = s.k().ok_or(GeometryError::WrongPlaneKind {
        expected: "metric-affine",
    })?;
    let m = real_matrix_of(conic, s.tol())?;
    let v = decompose(&m, &k, s.tol())?;
    Ok(CircleDecomposition {
        p: v[0],
        q: v[1],
        r: v[2],
    })
}

impl CircleDecomposition {
    /// The conic `k1 yz + k2 zx + k3 xy + (px + qy + rz)(x + y + z)`.
    pub fn reassemble(&self, k: &[f64; 3]) -> Conic {
        assemble_decomposed(k, &Vector3::new(self.p, self.q, self.r))
    }
}
