//! Absolute forms, plane classification and the metric notions built on them.

use std::fmt;

use nalgebra::{Matrix3, SymmetricEigen, Vector3};

use crate::error::{GeometryError, Result};
use crate::projective::{chi, Conic, HLine, HPoint};
use crate::tolerance::Tolerance;

/// The five plane geometries reachable from a real absolute form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlaneKind {
    Elliptic,
    Hyperbolic,
    Euclidean,
    Minkowski,
    Galilean,
}

impl PlaneKind {
    /// True for the three kinds with a singular (rank-1) absolute form.
    pub fn is_metric_affine(self) -> bool {
        matches!(self, Self::Euclidean | Self::Minkowski | Self::Galilean)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Elliptic => "elliptic",
            Self::Hyperbolic => "hyperbolic",
            Self::Euclidean => "euclidean",
            Self::Minkowski => "minkowski",
            Self::Galilean => "galilean",
        }
    }
}

impl fmt::Display for PlaneKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `v -> (v_A(v_A - v_B - v_C), v_B(v_B - v_C - v_A), v_C(v_C - v_A - v_B))`.
///
/// Sends the Lemoine point to the circumcenter and back; applying it twice
/// multiplies by `rho^2`-type scalars only, so it is an involution on points.
pub fn lemoine_circumcenter_map(v: &[f64; 3]) -> [f64; 3] {
    let [a, b, c] = *v;
    [a * (a - b - c), b * (b - c - a), c * (c - a - b)]
}

/// `k1^2 + k2^2 + k3^2 - 2 k1 k2 - 2 k1 k3 - 2 k2 k3`.
pub fn rho_squared(k: &[f64; 3]) -> f64 {
    let [a, b, c] = *k;
    a * a + b * b + c * c - 2.0 * (a * b + a * c + b * c)
}

/// A real absolute form together with everything read off from it.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneStructure {
    phi: Matrix3<f64>,
    kind: PlaneKind,
    circumcenter: Option<HPoint>,
    q: Option<[f64; 3]>,
    k: Option<[f64; 3]>,
    tol: Tolerance,
}

impl PlaneStructure {
    /// The absolute form, normalized so that hyperbolic forms have signature
    /// (2,1) and definite forms are positive.
    pub fn phi(&self) -> Conic {
        Conic::from_real_matrix(&self.phi).expect("nonzero form")
    }

    pub fn phi_matrix(&self) -> &Matrix3<f64> {
        &self.phi
    }

    pub fn kind(&self) -> PlaneKind {
        self.kind
    }

    pub fn circumcenter(&self) -> Option<&HPoint> {
        self.circumcenter.as_ref()
    }

    pub fn q(&self) -> Option<[f64; 3]> {
        self.q
    }

    pub fn k(&self) -> Option<[f64; 3]> {
        self.k
    }

    pub fn tol(&self) -> &Tolerance {
        &self.tol
    }

    pub fn is_singular(&self) -> bool {
        self.kind.is_metric_affine()
    }

    /// `phi(u)`.
    pub fn form(&self, u: &Vector3<f64>) -> f64 {
        u.dot(&(self.phi * u))
    }

    /// Polar bilinear form `b(u, v) = u^T phi v`.
    pub fn bilinear(&self, u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
        u.dot(&(self.phi * v))
    }

    fn phi_scale(&self) -> f64 {
        self.phi.amax()
    }

    /// `phi(p)` is negligible relative to `|phi| |p|^2`.
    pub fn is_isotropic(&self, p: &Vector3<f64>) -> bool {
        self.tol
            .negligible(self.form(p), self.phi_scale() * p.norm_squared())
    }

    fn finite_point(&self, p: &HPoint) -> Result<Vector3<f64>> {
        if !p.is_real(&self.tol) {
            return Err(GeometryError::ComplexPoint);
        }
        let v = p.re();
        if self.is_isotropic(&v) {
            return Err(GeometryError::IsotropicPoint);
        }
        Ok(v)
    }
}

fn signature(m: &Matrix3<f64>, tol: &Tolerance) -> (usize, usize, usize) {
    let eig = SymmetricEigen::new(*m).eigenvalues;
    let top = eig.amax();
    let thresh = tol.eps * top;
    let pos = eig.iter().filter(|&&e| e > thresh).count();
    let neg = eig.iter().filter(|&&e| e < -thresh).count();
    (pos, neg, 3 - pos - neg)
}

fn regular_q(m: &Matrix3<f64>, tol: &Tolerance) -> Result<Option<[f64; 3]>> {
    let d = [m[(0, 0)], m[(1, 1)], m[(2, 2)]];
    let s = d[0].signum();
    if d.iter().any(|&x| tol.negligible(x, m.amax()) || x.signum() != s) {
        return Ok(None);
    }
    let entry = |i: usize, j: usize| s * m[(i, j)] / (d[i] * d[j]).abs().sqrt();
    let q = [entry(1, 2), entry(2, 0), entry(0, 1)];
    if q.iter().any(|x| tol.close((x.abs()).into(), 1.0.into())) {
        return Err(GeometryError::DegenerateQ);
    }
    Ok(Some(q))
}

/// Classifies a real absolute form.
///
/// Regular forms give elliptic or hyperbolic planes; the only accepted
/// singular form is `(x + y + z)^2`, whose geometry is fixed by the
/// circumcenter `o` of the reference triangle.
pub fn classify_plane(phi: &Conic, o: Option<&HPoint>, tol: &Tolerance) -> Result<PlaneStructure> {
    if !phi.is_real(tol) {
        return Err(GeometryError::UnsupportedSignature("complex absolute form".into()));
    }
    let mut m = phi.real_matrix();
    let (pos, neg, zero) = signature(&m, tol);
    match zero {
        0 => {
            if neg >= 2 {
                m = -m;
            }
            let kind = if pos == 3 || neg == 3 {
                PlaneKind::Elliptic
            } else {
                PlaneKind::Hyperbolic
            };
            let q = regular_q(&m, tol)?;
            Ok(PlaneStructure {
                phi: m,
                kind,
                circumcenter: None,
                q,
                k: None,
                tol: *tol,
            })
        }
        2 => {
            let ones = Matrix3::repeat(1.0);
            let t = m[(0, 0)];
            if t == 0.0 || !(m / t - ones).iter().all(|x| x.abs() <= tol.eps) {
                return Err(GeometryError::UnsupportedSignature(
                    "rank-1 form other than (x+y+z)^2".into(),
                ));
            }
            let o = o.ok_or(GeometryError::MissingCircumcenter)?;
            let k = lemoine_from_circumcenter(o, tol)?;
            let mut s = singular_structure(k, tol);
            s.circumcenter = Some(*o);
            Ok(s)
        }
        1 => {
            regular_q(&m, tol)?;
            Err(GeometryError::UnsupportedSignature(
                "rank-2 forms (dual planes) are not supported".into(),
            ))
        }
        _ => Err(GeometryError::UnsupportedSignature("zero form".into())),
    }
}

fn lemoine_from_circumcenter(o: &HPoint, tol: &Tolerance) -> Result<[f64; 3]> {
    if !o.is_real(tol) {
        return Err(GeometryError::ForbiddenCircumcenter("not real".into()));
    }
    let forbidden = [
        ([1.0, 0.0, 0.0], "A"),
        ([0.0, 1.0, 0.0], "B"),
        ([0.0, 0.0, 1.0], "C"),
        ([1.0, 1.0, 1.0], "the centroid G"),
    ];
    for (v, name) in forbidden {
        if o.proj_eq(&HPoint::real(v[0], v[1], v[2])?, tol) {
            return Err(GeometryError::ForbiddenCircumcenter(format!("coincides with {name}")));
        }
    }
    let v = o.re();
    if tol.negligible(v.sum(), v.abs().sum()) {
        return Err(GeometryError::ForbiddenCircumcenter("on the line at infinity".into()));
    }
    let k = lemoine_circumcenter_map(&[v[0], v[1], v[2]]);
    let kmax = k.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if k.iter().any(|x| tol.negligible(*x, kmax)) {
        return Err(GeometryError::ForbiddenCircumcenter(
            "circumcircle degenerates into a line pair".into(),
        ));
    }
    Ok(k)
}

fn singular_structure(k: [f64; 3], tol: &Tolerance) -> PlaneStructure {
    let r2 = rho_squared(&k);
    let knorm2: f64 = k.iter().map(|x| x * x).sum();
    let kind = if tol.negligible(r2, knorm2) {
        PlaneKind::Galilean
    } else if r2 > 0.0 {
        PlaneKind::Minkowski
    } else {
        PlaneKind::Euclidean
    };
    let o = lemoine_circumcenter_map(&k);
    PlaneStructure {
        phi: Matrix3::repeat(1.0),
        kind,
        circumcenter: HPoint::real(o[0], o[1], o[2]).ok(),
        q: None,
        k: Some(k),
        tol: *tol,
    }
}

/// Metric-affine structure given directly by the Lemoine point `k` of the
/// reference triangle (all components nonzero).
///
/// Unlike [`classify_plane`] this accepts `K = G` (and hence `O = G`) and the
/// galilean case, where the circumcenter lies on the line at infinity.
pub fn classify_plane_with_lemoine(k: [f64; 3], tol: &Tolerance) -> Result<PlaneStructure> {
    let kmax = k.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if !k.iter().all(|x| x.is_finite()) || kmax == 0.0 || k.iter().any(|x| tol.negligible(*x, kmax)) {
        return Err(GeometryError::ForbiddenCircumcenter(
            "Lemoine point must have nonzero barycentrics".into(),
        ));
    }
    Ok(singular_structure(k, tol))
}

/// Anisotropic real point scaled so that `|phi(v)| = 1` and `chi(v) = +1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedPoint {
    pub v: Vector3<f64>,
    /// Sign of `phi(v)`.
    pub sign_class: i8,
}

impl NormalizedPoint {
    pub fn point(&self) -> HPoint {
        HPoint::from_real(&self.v).expect("normalized points are nonzero")
    }
}

pub fn normalize_point(p: &HPoint, s: &PlaneStructure) -> Result<NormalizedPoint> {
    let v = s.finite_point(p)?;
    let f = s.form(&v);
    let sign = chi(&[v[0], v[1], v[2]]) as f64;
    let v = v * (sign / f.abs().sqrt());
    Ok(NormalizedPoint {
        v,
        sign_class: if f > 0.0 { 1 } else { -1 },
    })
}

/// Same congruence class. Only hyperbolic planes have two classes.
pub fn congruent(p: &HPoint, q: &HPoint, s: &PlaneStructure) -> Result<bool> {
    let a = normalize_point(p, s)?;
    let b = normalize_point(q, s)?;
    Ok(s.kind != PlaneKind::Hyperbolic || a.sign_class == b.sign_class)
}

/// Midpoints of the two segments joining congruent points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentMidpoints {
    pub m_plus: HPoint,
    pub m_minus: HPoint,
}

pub fn midpoints(p: &HPoint, q: &HPoint, s: &PlaneStructure) -> Result<SegmentMidpoints> {
    if p.proj_eq(q, &s.tol) {
        return Err(GeometryError::CoincidentArguments);
    }
    let a = normalize_point(p, s)?;
    let b = normalize_point(q, s)?;
    if s.kind == PlaneKind::Hyperbolic && a.sign_class != b.sign_class {
        return Err(GeometryError::NotCongruent);
    }
    Ok(SegmentMidpoints {
        m_plus: HPoint::from_real(&(a.v + b.v))?,
        m_minus: HPoint::from_real(&(a.v - b.v))?,
    })
}

/// `[a R° + b S° + c T°]`.
pub fn combine(coeffs: [f64; 3], points: [&NormalizedPoint; 3], tol: &Tolerance) -> Result<HPoint> {
    let sum = points[0].v * coeffs[0] + points[1].v * coeffs[1] + points[2].v * coeffs[2];
    let scale: f64 = coeffs
        .iter()
        .zip(points.iter())
        .map(|(c, p)| c.abs() * p.v.norm())
        .sum();
    if tol.negligible(sum.norm(), scale) {
        return Err(GeometryError::ZeroCombination);
    }
    HPoint::from_real(&sum)
}

/// Which of the four triangles with vertices `R, S, T` contains a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// 0 is the triangle `{q_i >= 0}`; `i` in 1..=3 the one where only
    /// `q_i` has the odd sign.
    Triangle(u8),
    Boundary,
}

pub fn triangle_region(
    p: &HPoint,
    frame: [&NormalizedPoint; 3],
    tol: &Tolerance,
) -> Result<Region> {
    if !p.is_real(tol) {
        return Err(GeometryError::ComplexPoint);
    }
    let m = Matrix3::from_columns(&[frame[0].v, frame[1].v, frame[2].v]);
    let scale = frame.iter().map(|f| f.v.norm()).product::<f64>();
    if tol.negligible(m.determinant(), scale) {
        return Err(GeometryError::CollinearFrame);
    }
    let q = m.lu().solve(&p.re()).ok_or(GeometryError::CollinearFrame)?;
    let qmax = q.amax();
    if q.iter().any(|x| x.abs() <= tol.eps * qmax) {
        return Ok(Region::Boundary);
    }
    let positives = q.iter().filter(|&&x| x > 0.0).count();
    Ok(match positives {
        0 | 3 => Region::Triangle(0),
        1 => Region::Triangle(q.iter().position(|&x| x > 0.0).unwrap() as u8 + 1),
        _ => Region::Triangle(q.iter().position(|&x| x < 0.0).unwrap() as u8 + 1),
    })
}

/// The absolute form in barycentrics of the reference triangle: the
/// `q`-form for regular planes, `(x+y+z)^2` for singular ones.
pub fn absolute_conic_barycentric(s: &PlaneStructure) -> Conic {
    match s.q {
        Some([qa, qb, qc]) => {
            #[rustfmt::skip]
            let m = Matrix3::new(
                1.0, qc, qb,
                qc, 1.0, qa,
                qb, qa, 1.0,
            );
            Conic::from_real_matrix(&m).expect("nonzero form")
        }
        None => s.phi(),
    }
}

/// Congruence of lines.
///
/// Regular planes compare the classes of the poles. In metric-affine planes
/// two lines are congruent when their points at infinity lie in the same
/// component of the line at infinity minus the circular points, i.e. when
/// the circumcircle form has the same sign at both.
pub fn lines_congruent(l1: &HLine, l2: &HLine, s: &PlaneStructure) -> Result<bool> {
    let tol = &s.tol;
    if !l1.is_real(tol) || !l2.is_real(tol) {
        return Err(GeometryError::ComplexPoint);
    }
    match s.k {
        Some(k) => {
            let infinity = Vector3::repeat(1.0);
            let sign = |l: &HLine| -> Result<f64> {
                let x = l.re().cross(&infinity);
                if tol.negligible(x.norm(), l.re().norm()) {
                    return Err(GeometryError::IsotropicPoint);
                }
                let val = k[0] * x[1] * x[2] + k[1] * x[2] * x[0] + k[2] * x[0] * x[1];
                let scale = k.iter().fold(0.0f64, |a, v| a.max(v.abs())) * x.norm_squared();
                if tol.negligible(val, scale) {
                    return Err(GeometryError::IsotropicPoint);
                }
                Ok(val.signum())
            };
            Ok(sign(l1)? == sign(l2)?)
        }
        None => {
            let inv = s.phi.try_inverse().ok_or(GeometryError::SingularSystem)?;
            let p1 = HPoint::from_real(&(inv * l1.re()))?;
            let p2 = HPoint::from_real(&(inv * l2.re()))?;
            congruent(&p1, &p2, s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn q_form(q: [f64; 3]) -> Conic {
        Conic::from_coefficients(1.0, 1.0, 1.0, 2.0 * q[0], 2.0 * q[1], 2.0 * q[2]).unwrap()
    }

    fn elliptic0() -> PlaneStructure {
        classify_plane(&q_form([0.0; 3]), None, &tol()).unwrap()
    }

    fn hyperbolic() -> PlaneStructure {
        let phi = Conic::from_coefficients(1.0, 1.0, -1.0, 0.0, 0.0, 0.0).unwrap();
        classify_plane(&phi, None, &tol()).unwrap()
    }

    fn pt(x: f64, y: f64, z: f64) -> HPoint {
        HPoint::real(x, y, z).unwrap()
    }

    #[test]
    fn classify_examples() {
        let e = elliptic0();
        assert_eq!(e.kind(), PlaneKind::Elliptic);
        assert_eq!(e.q(), Some([0.0; 3]));
        assert_eq!(hyperbolic().kind(), PlaneKind::Hyperbolic);
        let ones = Conic::from_coefficients(1.0, 1.0, 1.0, 2.0, 2.0, 2.0).unwrap();
        let s = classify_plane(&ones, Some(&pt(1.0, 1.0, -1.0)), &tol()).unwrap();
        assert_eq!(s.k(), Some([1.0, 1.0, 3.0]));
        assert_eq!(s.kind(), PlaneKind::Euclidean);
        assert_eq!(classify_plane(&ones, None, &tol()), Err(GeometryError::MissingCircumcenter));
    }

    #[test]
    fn rho_squared_decides_metric_affine_kind() {
        let t = tol();
        assert_eq!(rho_squared(&[1.0, 1.0, 1.0]), -3.0);
        assert_eq!(classify_plane_with_lemoine([1.0, 1.0, 1.0], &t).unwrap().kind(), PlaneKind::Euclidean);
        assert_eq!(rho_squared(&[9.0, 1.0, 1.0]), 45.0);
        assert_eq!(classify_plane_with_lemoine([9.0, 1.0, 1.0], &t).unwrap().kind(), PlaneKind::Minkowski);
        assert_eq!(classify_plane_with_lemoine([4.0, 1.0, 1.0], &t).unwrap().kind(), PlaneKind::Galilean);
    }

    #[test]
    fn classify_rejections() {
        let t = tol();
        let rank2 = Conic::from_coefficients(1.0, 1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        assert!(matches!(classify_plane(&rank2, None, &t), Err(GeometryError::UnsupportedSignature(_))));
        let other_rank1 = Conic::from_coefficients(1.0, 0.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        assert!(matches!(
            classify_plane(&other_rank1, Some(&pt(1.0, 2.0, 3.0)), &t),
            Err(GeometryError::UnsupportedSignature(_))
        ));
        let ones = Conic::from_coefficients(1.0, 1.0, 1.0, 2.0, 2.0, 2.0).unwrap();
        for o in [pt(1.0, 1.0, 1.0), pt(0.0, 0.0, 1.0), pt(1.0, -1.0, 0.0)] {
            assert!(matches!(
                classify_plane(&ones, Some(&o), &t),
                Err(GeometryError::ForbiddenCircumcenter(_))
            ));
        }
        assert_eq!(classify_plane(&q_form([1.0, 0.0, 0.0]), None, &t), Err(GeometryError::DegenerateQ));
    }

    #[test]
    fn hyperbolic_sign_convention() {
        let phi = Conic::from_coefficients(-1.0, -1.0, 1.0, 0.0, 0.0, 0.0).unwrap();
        let s = classify_plane(&phi, None, &tol()).unwrap();
        assert_eq!(s.kind(), PlaneKind::Hyperbolic);
        assert_eq!(normalize_point(&pt(0.0, 0.0, 1.0), &s).unwrap().sign_class, -1);
        let strong = classify_plane(&q_form([2.0, 2.0, 2.0]), None, &tol()).unwrap();
        assert_eq!(strong.kind(), PlaneKind::Hyperbolic);
        assert_eq!(strong.q(), Some([2.0, 2.0, 2.0]));
    }

    #[test]
    fn normalize_examples() {
        let e = elliptic0();
        let a = normalize_point(&pt(2.0, 0.0, 0.0), &e).unwrap();
        assert_eq!((a.v, a.sign_class), (Vector3::new(1.0, 0.0, 0.0), 1));
        let b = normalize_point(&pt(0.0, 3.0, -3.0), &e).unwrap();
        let r = 0.5f64.sqrt();
        assert!((b.v - Vector3::new(0.0, r, -r)).norm() < 1e-15);
        let c = normalize_point(&pt(0.0, 0.0, 5.0), &hyperbolic()).unwrap();
        assert_eq!((c.v, c.sign_class), (Vector3::new(0.0, 0.0, 1.0), -1));
        assert_eq!(normalize_point(&pt(1.0, 0.0, 1.0), &hyperbolic()), Err(GeometryError::IsotropicPoint));
    }

    #[test]
    fn congruence_examples() {
        let h = hyperbolic();
        assert!(!congruent(&pt(0.0, 0.0, 1.0), &pt(1.0, 0.0, 0.0), &h).unwrap());
        assert!(congruent(&pt(0.0, 0.0, 1.0), &pt(1.0, 0.0, 2.0), &h).unwrap());
        assert!(congruent(&pt(1.0, 2.0, 3.0), &pt(-1.0, 0.5, 0.0), &elliptic0()).unwrap());
    }

    #[test]
    fn midpoint_examples() {
        let e = elliptic0();
        let m = midpoints(&pt(1.0, 0.0, 0.0), &pt(0.0, 1.0, 0.0), &e).unwrap();
        assert_eq!(m.m_plus, pt(1.0, 1.0, 0.0));
        assert_eq!(m.m_minus, pt(1.0, -1.0, 0.0));
        assert_eq!(
            midpoints(&pt(1.0, 0.0, 0.0), &pt(0.0, 0.0, 1.0), &hyperbolic()),
            Err(GeometryError::NotCongruent)
        );
        // chi makes Q° = (0,0,1) here
        let m = midpoints(&pt(3.0, 0.0, 0.0), &pt(0.0, 0.0, -7.0), &e).unwrap();
        assert_eq!(m.m_plus, pt(1.0, 0.0, 1.0));
        assert_eq!(m.m_minus, pt(1.0, 0.0, -1.0));
    }

    #[test]
    fn combine_examples() {
        let e = elliptic0();
        let n: Vec<NormalizedPoint> = [pt(1.0, 0.0, 0.0), pt(0.0, 1.0, 0.0), pt(0.0, 0.0, 1.0)]
            .iter()
            .map(|p| normalize_point(p, &e).unwrap())
            .collect();
        let f = [&n[0], &n[1], &n[2]];
        assert_eq!(combine([1.0, 1.0, 1.0], f, &tol()).unwrap(), pt(1.0, 1.0, 1.0));
        assert_eq!(combine([1.0, 0.0, 0.0], f, &tol()).unwrap(), pt(1.0, 0.0, 0.0));
        assert_eq!(combine([1.0, -1.0, 0.0], f, &tol()).unwrap(), pt(1.0, -1.0, 0.0));
        assert_eq!(combine([0.0, 0.0, 0.0], f, &tol()), Err(GeometryError::ZeroCombination));
    }

    #[test]
    fn region_examples() {
        let e = elliptic0();
        let n: Vec<NormalizedPoint> = [pt(1.0, 0.0, 0.0), pt(0.0, 1.0, 0.0), pt(0.0, 0.0, 1.0)]
            .iter()
            .map(|p| normalize_point(p, &e).unwrap())
            .collect();
        let f = [&n[0], &n[1], &n[2]];
        assert_eq!(triangle_region(&pt(1.0, 1.0, 1.0), f, &tol()).unwrap(), Region::Triangle(0));
        assert_eq!(triangle_region(&pt(1.0, -1.0, -1.0), f, &tol()).unwrap(), Region::Triangle(1));
        assert_eq!(triangle_region(&pt(-1.0, 2.0, -1.0), f, &tol()).unwrap(), Region::Triangle(2));
        assert_eq!(triangle_region(&pt(0.0, 1.0, 1.0), f, &tol()).unwrap(), Region::Boundary);
        let g = [&n[0], &n[1], &n[1]];
        assert_eq!(triangle_region(&pt(1.0, 1.0, 1.0), g, &tol()), Err(GeometryError::CollinearFrame));
    }

    #[test]
    fn barycentric_absolute() {
        assert_eq!(absolute_conic_barycentric(&elliptic0()).real_matrix(), Matrix3::identity());
        let s = classify_plane(&q_form([0.5, 0.0, 0.0]), None, &tol()).unwrap();
        assert_eq!(absolute_conic_barycentric(&s).real_matrix()[(1, 2)], 0.5);
        let g = classify_plane_with_lemoine([1.0, 1.0, 1.0], &tol()).unwrap();
        assert_eq!(absolute_conic_barycentric(&g).real_matrix(), Matrix3::repeat(1.0));
    }

    #[test]
    fn line_congruence() {
        let t = tol();
        let mink = classify_plane_with_lemoine([9.0, 1.0, 1.0], &t).unwrap();
        let eucl = classify_plane_with_lemoine([1.0, 1.0, 1.0], &t).unwrap();
        let l1 = HLine::real(1.0, 0.0, 0.0).unwrap();
        let l2 = HLine::real(0.0, 1.0, 0.0).unwrap();
        let l3 = HLine::real(0.0, 0.0, 1.0).unwrap();
        assert!(lines_congruent(&l1, &l2, &eucl).unwrap());
        // points at infinity (0,1,-1), (1,0,-1), (1,-1,0): values -9, -1, -1
        assert!(lines_congruent(&l1, &l2, &mink).unwrap());
        assert!(lines_congruent(&l2, &l3, &mink).unwrap());
        // (1,1,-2) at infinity: 9(-2) + 1(-2) + 1 = -19; (2,-1,-1): 9 -2 -1 ...
        let l4 = HLine::real(1.0, -1.0, 0.0).unwrap();
        let x = Vector3::new(1.0, -1.0, 0.0).cross(&Vector3::repeat(1.0));
        let v = 9.0 * x[1] * x[2] + x[2] * x[0] + x[0] * x[1];
        assert_eq!(lines_congruent(&l4, &l1, &mink).unwrap(), v < 0.0);
    }

    fn finite3() -> impl Strategy<Value = Vector3<f64>> {
        prop::array::uniform3(-4.0..4.0f64).prop_map(Vector3::from)
    }

    proptest! {
        #[test]
        fn normalization_is_projectively_idempotent(v in finite3(), t in prop_oneof![-5.0..-0.1f64, 0.1..5.0f64]) {
            let s = classify_plane(&q_form([0.3, -0.4, 0.2]), None, &tol()).unwrap();
            prop_assume!(v.norm() > 0.1 && s.form(&v).abs() > 1e-3 * v.norm_squared());
            let a = normalize_point(&HPoint::from_real(&v).unwrap(), &s).unwrap();
            let b = normalize_point(&HPoint::from_real(&(v * t)).unwrap(), &s).unwrap();
            prop_assert!((a.v - b.v).norm() < 1e-12 * a.v.norm());
            prop_assert_eq!(a.sign_class, b.sign_class);
            prop_assert!((s.form(&a.v).abs() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn midpoints_are_equidistant(u in finite3(), w in finite3(), q in prop::array::uniform3(-0.9..0.9f64)) {
            let s = classify_plane(&q_form(q), None, &tol()).unwrap();
            prop_assume!(u.norm() > 0.1 && w.norm() > 0.1);
            prop_assume!(s.form(&u).abs() > 1e-2 * u.norm_squared() && s.form(&w).abs() > 1e-2 * w.norm_squared());
            let (p, r) = (HPoint::from_real(&u).unwrap(), HPoint::from_real(&w).unwrap());
            prop_assume!(p.distance(&r) > 1e-3);
            let Ok(m) = midpoints(&p, &r, &s) else { return Ok(()); };
            let (pn, rn) = (normalize_point(&p, &s).unwrap(), normalize_point(&r, &s).unwrap());
            for mid in [m.m_plus, m.m_minus] {
                let Ok(mn) = normalize_point(&mid, &s) else { continue; };
                let (d1, d2) = (s.bilinear(&pn.v, &mn.v).abs(), s.bilinear(&rn.v, &mn.v).abs());
                prop_assert!((d1 - d2).abs() <= 1e-9 * d1.max(1.0));
            }
        }

        #[test]
        fn regions_partition_the_plane(v in finite3()) {
            let s = elliptic0();
            let f: Vec<NormalizedPoint> = [pt(1.0, 2.0, 0.5), pt(-1.0, 0.3, 1.0), pt(0.2, -1.0, 2.0)]
                .iter().map(|p| normalize_point(p, &s).unwrap()).collect();
            prop_assume!(v.norm() > 0.1);
            let r = triangle_region(&HPoint::from_real(&v).unwrap(), [&f[0], &f[1], &f[2]], &tol()).unwrap();
            let r2 = triangle_region(&HPoint::from_real(&(-v)).unwrap(), [&f[0], &f[1], &f[2]], &tol()).unwrap();
            prop_assert_eq!(r, r2);
            prop_assert!(matches!(r, Region::Triangle(0..=3) | Region::Boundary));
        }

        #[test]
        fn classification_is_scale_invariant(q in prop::array::uniform3(-3.0..3.0f64), t in prop_oneof![-5.0..-0.1f64, 0.1..5.0f64]) {
            prop_assume!(q.iter().all(|x| (x.abs() - 1.0).abs() > 1e-3));
            let base = q_form(q);
            let Ok(a) = classify_plane(&base, None, &tol()) else { return Ok(()); };
            let b = classify_plane(&base.scaled(t.into()), None, &tol()).unwrap();
            prop_assert_eq!(a.kind(), b.kind());
        }
    }
}
