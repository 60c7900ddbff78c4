//! Quadrilateral sets on the line at infinity and the cross-ratio angle
//! measure of metric-affine planes.

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::cayley_klein::PlaneKind;
use crate::circles::{circular_points, CircleWithCenter, ReferenceFrame};
use crate::error::{GeometryError, Result};
use crate::miquel::{miquel_point_affine, quadrilateral_vertices};
use crate::projective::{cross_ratio_lines, det3, join, on_conic, CVec3, HLine, HPoint};

/// Arguments of [`tau`]: a probe vector `q` and six points `r, ..., w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Septuple {
    pub q: CVec3,
    pub r: CVec3,
    pub s: CVec3,
    pub t: CVec3,
    pub u: CVec3,
    pub v: CVec3,
    pub w: CVec3,
}

impl Septuple {
    /// Fails with [`GeometryError::DegenerateConstruction`] when the probe's
    /// coordinate sum vanishes.
    pub fn new(q: CVec3, points: [&HPoint; 6]) -> Result<Self> {
        if (q[0] + q[1] + q[2]).norm() == 0.0 {
            return Err(GeometryError::DegenerateConstruction(
                "probe coordinates sum to zero".into(),
            ));
        }
        let [r, s, t, u, v, w] = points.map(|p| *p.coords());
        Ok(Self { q, r, s, t, u, v, w })
    }

    /// `|q|^3 |r| |s| |t| |u| |v| |w|`, an upper bound for each term of `tau`.
    pub fn scale(&self) -> f64 {
        let others = [self.r, self.s, self.t, self.u, self.v, self.w];
        self.q.norm().powi(3) * others.iter().map(|x| x.norm()).product::<f64>()
    }
}

/// `det(q,t,u) det(q,v,s) det(q,w,r) - det(q,v,w) det(q,t,s) det(q,u,r)`.
///
/// For six points on a line, `tau = 0` says that `(r, s; t, u; v, w)` is a
/// quadrilateral set.
pub fn tau(x: &Septuple) -> Complex64 {
    let d = |a: &CVec3, b: &CVec3| det3(&x.q, a, b);
    d(&x.t, &x.u) * d(&x.v, &x.s) * d(&x.w, &x.r) - d(&x.v, &x.w) * d(&x.t, &x.s) * d(&x.u, &x.r)
}

/// Probe vectors used by [`bisector_lemma_check`].
pub const LEMMA_PROBES: [[f64; 3]; 3] = [[1.0, 2.0, 3.0], [1.0, 0.0, 0.0], [2.0, -1.0, 0.0]];

fn coordinate_sum(v: &Vector3<f64>) -> f64 {
    v.sum()
}

/// Points `X~ = (X x Mq) x L_inf` for the six vertices, in the order
/// `A~, B~, C~, D~, E~, F~`.
pub fn tilde_points(lmn: [f64; 3], frame: &ReferenceFrame) -> Result<[HPoint; 6]> {
    let tol = frame.tol();
    let mq = miquel_point_affine(lmn, frame)?.point.re();
    let sm = coordinate_sum(&mq);
    if tol.negligible(sm, mq.abs().sum()) {
        return Err(GeometryError::MiquelAtInfinity);
    }
    let verts = quadrilateral_vertices(lmn);
    let mut out = Vec::with_capacity(6);
    for x in &verts {
        let v = x * sm - mq * coordinate_sum(x);
        if tol.negligible(v.norm(), x.norm() * mq.norm()) {
            return Err(GeometryError::DegenerateScene(
                "Miquel point coincides with a vertex".into(),
            ));
        }
        out.push(HPoint::from_real(&v)?);
    }
    Ok([out[0], out[1], out[2], out[3], out[4], out[5]])
}

fn non_galilean(frame: &ReferenceFrame) -> Result<()> {
    match frame.kind() {
        PlaneKind::Galilean => Err(GeometryError::GalileanPlane),
        k if k.is_metric_affine() => Ok(()),
        _ => Err(GeometryError::WrongPlaneKind {
            expected: "euclidean or minkowski",
        }),
    }
}

/// Relative values `|tau| / scale` of the two quadrilateral-set conditions
/// `(I, J; B~, D~; A~, E~)` and `(I, J; C~, D~; A~, F~)`, one row per probe.
pub fn lemma_residuals(tilde: &[HPoint; 6], frame: &ReferenceFrame) -> Result<[[f64; 2]; 3]> {
    non_galilean(frame)?;
    let (i, j) = circular_points(frame)?;
    let [a, b, cc, d, e, f] = tilde.each_ref();
    let mut out = [[0.0; 2]; 3];
    for (row, probe) in out.iter_mut().zip(LEMMA_PROBES.iter()) {
        let q = Vector3::from(*probe).map(Complex64::from);
        let first = Septuple::new(q, [&i, &j, b, d, a, e])?;
        let second = Septuple::new(q, [&i, &j, cc, d, a, f])?;
        *row = [first, second].map(|x| tau(&x).norm() / x.scale());
    }
    Ok(out)
}

/// The six angles of the complete quadrilateral at `Mq` share their
/// bisectors: both `tau` conditions vanish for every probe.
pub fn bisector_lemma_check(lmn: [f64; 3], frame: &ReferenceFrame) -> Result<bool> {
    non_galilean(frame)?;
    let tilde = tilde_points(lmn, frame)?;
    let eps = frame.tol().eps;
    Ok(lemma_residuals(&tilde, frame)?
        .iter()
        .flatten()
        .all(|r| *r <= eps))
}

/// Half the principal logarithm of a line cross ratio with the isotropic legs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleMeasure {
    pub value: Complex64,
}

impl AngleMeasure {
    /// The real angle of a euclidean measure, `|Im value|`.
    pub fn euclidean_angle(&self) -> f64 {
        self.value.im.abs()
    }
}

/// Cross ratio `(VP, VQ; VI, VJ)`.
pub fn angle_cross_ratio(v: &HPoint, p: &HPoint, q: &HPoint, frame: &ReferenceFrame) -> Result<Complex64> {
    non_galilean(frame)?;
    let tol = frame.tol();
    let s = frame.structure();
    if !v.is_real(tol) {
        return Err(GeometryError::ComplexPoint);
    }
    let vr = v.re();
    if tol.negligible(vr.sum(), vr.abs().sum()) {
        return Err(GeometryError::DegenerateConstruction("vertex lies at infinity".into()));
    }
    if s.is_isotropic(&vr) {
        return Err(GeometryError::IsotropicPoint);
    }
    let (i, j) = circular_points(frame)?;
    let legs = [join(v, p, tol)?, join(v, q, tol)?];
    let isotropic = |l: &HLine| {
        [&i, &j].iter().any(|c| {
            let (lc, pc) = (l.coords(), c.coords());
            tol.negligible(lc.dot(pc).norm(), lc.norm() * pc.norm())
        })
    };
    if legs.iter().any(isotropic) {
        return Err(GeometryError::IsotropicLeg);
    }
    if legs[0].proj_eq(&legs[1], tol) {
        return Ok(Complex64::from(1.0));
    }
    let (vi, vj) = (join(v, &i, tol)?, join(v, &j, tol)?);
    cross_ratio_lines(&legs[0], &legs[1], &vi, &vj, tol)
}

/// `1/2 Log (VP, VQ; VI, VJ)`.
pub fn angle_measure(v: &HPoint, p: &HPoint, q: &HPoint, frame: &ReferenceFrame) -> Result<AngleMeasure> {
    let kappa = angle_cross_ratio(v, p, q, frame)?;
    Ok(AngleMeasure { value: kappa.ln() * 0.5 })
}

/// Cross ratios `kappa_1`, `kappa_2` seen from `R1` and `R2`.
pub fn inscribed_cross_ratios(
    circle: &CircleWithCenter,
    p: &HPoint,
    q: &HPoint,
    r1: &HPoint,
    r2: &HPoint,
    frame: &ReferenceFrame,
) -> Result<(Complex64, Complex64)> {
    non_galilean(frame)?;
    let tol = frame.tol();
    if [p, q, r1, r2].iter().any(|x| !on_conic(&circle.conic, x, tol)) {
        return Err(GeometryError::PointNotOnCircle);
    }
    Ok((angle_cross_ratio(r1, p, q, frame)?, angle_cross_ratio(r2, p, q, frame)?))
}

/// Inscribed angles over the chord `PQ` at `R1` and `R2` are equal or
/// supplementary: `kappa_1 = kappa_2` or `kappa_1 = 1 / kappa_2`.
pub fn inscribed_angle_check(
    circle: &CircleWithCenter,
    p: &HPoint,
    q: &HPoint,
    r1: &HPoint,
    r2: &HPoint,
    frame: &ReferenceFrame,
) -> Result<bool> {
    let (k1, k2) = inscribed_cross_ratios(circle, p, q, r1, r2, frame)?;
    let tol = frame.tol().scaled(10.0);
    Ok(tol.close(k1, k2) || tol.close(k1 * k2, Complex64::from(1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circles::circumcircle_through;
    use crate::projective::{c, cvec, meet};
    use crate::tolerance::Tolerance;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn pt(x: f64, y: f64, z: f64) -> HPoint {
        HPoint::real(x, y, z).unwrap()
    }

    fn euclid() -> ReferenceFrame {
        ReferenceFrame::from_lemoine([1.0, 1.0, 1.0], &tol()).unwrap()
    }

    fn minkowski() -> ReferenceFrame {
        ReferenceFrame::from_lemoine([9.0, 1.0, 1.0], &tol()).unwrap()
    }

    /// Direct evaluation of the six 3x3 determinants by cofactor expansion.
    fn tau_oracle(x: &Septuple) -> Complex64 {
        let det = |a: &CVec3, b: &CVec3, cc: &CVec3| {
            a[0] * (b[1] * cc[2] - b[2] * cc[1]) - a[1] * (b[0] * cc[2] - b[2] * cc[0])
                + a[2] * (b[0] * cc[1] - b[1] * cc[0])
        };
        let q = &x.q;
        det(q, &x.t, &x.u) * det(q, &x.v, &x.s) * det(q, &x.w, &x.r)
            - det(q, &x.v, &x.w) * det(q, &x.t, &x.s) * det(q, &x.u, &x.r)
    }

    fn septuple(v: [[f64; 3]; 7]) -> Septuple {
        let [q, r, s, t, u, vv, w] = v.map(|a| cvec(a[0], a[1], a[2]));
        Septuple { q, r, s, t, u, v: vv, w }
    }

    #[test]
    fn tau_repeated_pair_vanishes() {
        let mut x = septuple([[1.0, 2.0, 3.0], [1.0, -1.0, 0.0], [2.0, 0.5, -2.5], [0.0, 1.0, -1.0], [3.0, -1.0, -2.0], [0.0; 3], [0.0; 3]]);
        x.v = x.t;
        x.w = x.u;
        assert_eq!(tau(&x), c(0.0));
    }

    #[test]
    fn tau_generic_is_nonzero() {
        let x = septuple([
            [1.0, 2.0, 3.0],
            [0.3, -1.0, 2.0],
            [1.5, 0.2, -0.7],
            [-2.0, 1.0, 0.4],
            [0.9, 0.9, -1.1],
            [2.2, -0.6, 0.1],
            [-0.4, 1.7, 0.8],
        ]);
        let v = tau(&x);
        assert!(v.norm() > 1e-3 * x.scale());
        assert!((v - tau_oracle(&x)).norm() <= 1e-12 * x.scale());
    }

    #[test]
    fn septuple_rejects_zero_sum_probe() {
        let p = pt(1.0, -1.0, 0.0);
        assert!(Septuple::new(cvec(1.0, 1.0, -2.0), [&p; 6]).is_err());
    }

    #[test]
    fn tilde_anchor() {
        let t = tol();
        let tl = tilde_points([1.0, 2.0, 3.0], &euclid()).unwrap();
        assert!(tl[0].proj_eq(&pt(1.0, 3.0, -4.0), &t));
        assert!(tl[1].proj_eq(&pt(3.0, -4.0, 1.0), &t));
        let a_mq = HLine::real(0.0, 4.0, 3.0).unwrap();
        assert!(crate::projective::incidence(&a_mq, &tl[0]) < 1e-15);
    }

    #[test]
    fn tilde_points_match_printed_vectors_for_unit_k() {
        let t = tol();
        let (l, m, n) = (0.7, 1.9, 3.4);
        let printed = [
            [l * (n - m), n * (m - l), m * (l - n)],
            [n * (m - l), m * (l - n), l * (n - m)],
            [m * (l - n), l * (n - m), n * (m - l)],
        ];
        let tl = tilde_points([l, m, n], &euclid()).unwrap();
        for (p, v) in tl.iter().zip(printed.iter()) {
            assert!(p.proj_eq(&pt(v[0], v[1], v[2]), &t), "{p}");
        }
    }

    #[test]
    fn tilde_errors() {
        assert_eq!(tilde_points([1.0, 1.0, 3.0], &euclid()), Err(GeometryError::CoincidentParameters));
        // l=1, m=2: sum of Mq vanishes at the root of 18n/(2-n) + n/(n-1) - 2
        let f = minkowski();
        let g = |n: f64| 18.0 * n / (2.0 - n) + n / (n - 1.0) - 2.0;
        let (mut a, mut b) = (0.5, 0.99);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if g(mid).signum() == g(a).signum() {
                a = mid;
            } else {
                b = mid;
            }
        }
        assert_eq!(tilde_points([1.0, 2.0, a], &f), Err(GeometryError::MiquelAtInfinity));
    }

    #[test]
    fn lemma_anchors() {
        assert!(bisector_lemma_check([1.0, 2.0, 3.0], &euclid()).unwrap());
        assert!(bisector_lemma_check([0.6, 1.3, 2.9], &minkowski()).unwrap());
        let gal = ReferenceFrame::from_lemoine([1.0, 1.0, 4.0], &tol()).unwrap();
        assert_eq!(gal.kind(), PlaneKind::Galilean);
        assert_eq!(bisector_lemma_check([1.0, 2.0, 3.0], &gal), Err(GeometryError::GalileanPlane));
    }

    #[test]
    fn lemma_negative_control() {
        let f = euclid();
        let fake = [
            pt(1.0, 2.0, -3.0),
            pt(4.0, -1.0, -3.0),
            pt(2.5, -3.0, 0.5),
            pt(-1.0, 3.0, -2.0),
            pt(0.2, 1.0, -1.2),
            pt(5.0, -2.0, -3.0),
        ];
        let res = lemma_residuals(&fake, &f).unwrap();
        assert!(res.iter().flatten().any(|r| *r > 1e-6));
    }

    #[test]
    fn euclidean_right_angle() {
        // side lengths 3, 4, 5: right angle at C
        let f = ReferenceFrame::from_lemoine([9.0, 16.0, 25.0], &tol()).unwrap();
        assert_eq!(f.kind(), PlaneKind::Euclidean);
        let (a, b, cc) = (pt(1.0, 0.0, 0.0), pt(0.0, 1.0, 0.0), pt(0.0, 0.0, 1.0));
        let kappa = angle_cross_ratio(&cc, &a, &b, &f).unwrap();
        assert!((kappa + 1.0).norm() < 1e-12, "{kappa}");
        let m = angle_measure(&cc, &a, &b, &f).unwrap();
        assert!((m.euclidean_angle() - PI / 2.0).abs() < 1e-12);
        let zero = angle_measure(&cc, &a, &a, &f).unwrap();
        assert!(zero.value.norm() < 1e-12);
    }

    #[test]
    fn euclidean_angles_of_a_345_triangle() {
        let f = ReferenceFrame::from_lemoine([9.0, 16.0, 25.0], &tol()).unwrap();
        let (a, b, cc) = (pt(1.0, 0.0, 0.0), pt(0.0, 1.0, 0.0), pt(0.0, 0.0, 1.0));
        // angle at A is opposite the side of length 3
        let at_a = angle_measure(&a, &b, &cc, &f).unwrap().euclidean_angle();
        assert!((at_a - (3.0f64 / 5.0).asin()).abs() < 1e-12);
    }

    #[test]
    fn minkowski_swap_negates() {
        let f = minkowski();
        let (i, j) = circular_points(&f).unwrap();
        let t = tol();
        let v = pt(1.0, 2.0, 3.0);
        let (p, q) = (pt(2.0, -1.0, 0.5), pt(2.0, -0.8, 0.5));
        let legs = [join(&v, &p, &t).unwrap(), join(&v, &q, &t).unwrap()];
        let (vi, vj) = (join(&v, &i, &t).unwrap(), join(&v, &j, &t).unwrap());
        let k1 = cross_ratio_lines(&legs[0], &legs[1], &vi, &vj, &t).unwrap();
        let k2 = cross_ratio_lines(&legs[0], &legs[1], &vj, &vi, &t).unwrap();
        assert!((k1 * k2 - 1.0).norm() < 1e-12);
        let m = angle_measure(&v, &p, &q, &f).unwrap();
        assert!((m.value - k1.ln() * 0.5).norm() < 1e-12);
        assert!(m.value.re.abs() > 1e-6, "{k1} {}", m.value);
        assert!(k1.re > 0.0, "{k1}");
        assert!((k1.ln() + k2.ln()).norm() < 1e-12);
    }

    #[test]
    fn angle_errors() {
        let f = euclid();
        let (i, _) = circular_points(&f).unwrap();
        let v = pt(1.0, 2.0, 3.0);
        let t = tol();
        let leg = join(&v, &i, &t).unwrap();
        let p = meet(&leg, &HLine::real(1.0, 0.0, 0.0).unwrap(), &t).unwrap();
        assert_eq!(angle_measure(&v, &p, &pt(0.0, 1.0, 0.0), &f), Err(GeometryError::IsotropicLeg));
        let gal = ReferenceFrame::from_lemoine([1.0, 1.0, 4.0], &t).unwrap();
        assert_eq!(angle_measure(&v, &pt(1.0, 0.0, 0.0), &pt(0.0, 1.0, 0.0), &gal), Err(GeometryError::GalileanPlane));
    }

    /// Point of the circumcircle `k1 yz + k2 zx + k3 xy = 0` seen from `A`
    /// along the line `y = s z`: `x = -k1 s / (k2 + k3 s)`.
    fn on_circum(k: [f64; 3], s: f64) -> HPoint {
        pt(-k[0] * s, s * (k[1] + k[2] * s), k[1] + k[2] * s)
    }

    fn circum(f: &ReferenceFrame) -> CircleWithCenter {
        let (a, b, cc) = (pt(1.0, 0.0, 0.0), pt(0.0, 1.0, 0.0), pt(0.0, 0.0, 1.0));
        circumcircle_through(&a, &b, &cc, f).unwrap()
    }

    #[test]
    fn inscribed_same_and_opposite_arcs() {
        let k = [1.0, 1.0, 1.0];
        let f = euclid();
        let circle = circum(&f);
        let (p, q) = (on_circum(k, 0.5), on_circum(k, 2.0));
        let same = (on_circum(k, -0.3), on_circum(k, -3.0));
        let opposite = (on_circum(k, 1.0), on_circum(k, -3.0));
        let (k1, k2) = inscribed_cross_ratios(&circle, &p, &q, &same.0, &same.1, &f).unwrap();
        assert!((k1 - k2).norm() < 1e-9);
        let (k1, k2) = inscribed_cross_ratios(&circle, &p, &q, &opposite.0, &opposite.1, &f).unwrap();
        assert!((k1 - k2).norm() < 1e-9);
        assert!(inscribed_angle_check(&circle, &p, &q, &same.0, &opposite.0, &f).unwrap());
        assert_eq!(
            inscribed_angle_check(&circle, &p, &q, &pt(1.0, 1.0, 1.0), &same.0, &f),
            Err(GeometryError::PointNotOnCircle)
        );
    }

    fn triangle_product(a: &HPoint, b: &HPoint, cc: &HPoint, f: &ReferenceFrame) -> Complex64 {
        angle_cross_ratio(a, b, cc, f).unwrap()
            * angle_cross_ratio(b, cc, a, f).unwrap()
            * angle_cross_ratio(cc, a, b, f).unwrap()
    }

    proptest! {
        #[test]
        fn tau_matches_oracle_and_pair_swap(v in prop::array::uniform7(prop::array::uniform3(-2.0..2.0f64))) {
            let x = septuple(v);
            let swapped = Septuple { t: x.v, u: x.w, v: x.t, w: x.u, ..x };
            prop_assert!((tau(&x) - tau_oracle(&x)).norm() <= 1e-12 * x.scale().max(1e-300));
            prop_assert!((tau(&x) + tau(&swapped)).norm() <= 1e-12 * x.scale().max(1e-300));
        }

        #[test]
        fn tau_is_homogeneous(v in prop::array::uniform7(prop::array::uniform3(-2.0..2.0f64)), t in 0.2..5.0f64) {
            let x = septuple(v);
            let scaled = Septuple { q: x.q * c(t), r: x.r * c(t), ..x };
            let expected = tau(&x) * t.powi(4);
            prop_assert!((tau(&scaled) - expected).norm() <= 1e-11 * x.scale() * t.powi(4));
        }

        #[test]
        fn lemma_holds_on_random_scenes(
            k in prop::array::uniform3(0.3..5.0f64),
            lmn in prop::array::uniform3(0.2..4.0f64),
            flip in 0usize..3,
        ) {
            let [l, m, n] = lmn;
            prop_assume!((l - m).abs() > 0.05 && (m - n).abs() > 0.05 && (n - l).abs() > 0.05);
            let mut k = k;
            k[flip] = -k[flip];
            let f = ReferenceFrame::from_lemoine(k, &tol()).unwrap();
            prop_assume!(f.kind() != PlaneKind::Galilean);
            match tilde_points(lmn, &f) {
                Ok(tl) => {
                    let res = lemma_residuals(&tl, &f).unwrap();
                    prop_assert!(res.iter().flatten().all(|r| *r <= 1e-9), "{:?}", res);
                    // oracle: tilde point = meet(join(X, Mq), L_inf)
                    let mq = miquel_point_affine(lmn, &f).unwrap().point;
                    let inf = HLine::real(1.0, 1.0, 1.0).unwrap();
                    for (x, p) in quadrilateral_vertices(lmn).iter().zip(tl.iter()) {
                        let xp = HPoint::from_real(x).unwrap();
                        let constructed = meet(&join(&xp, &mq, &tol()).unwrap(), &inf, &tol()).unwrap();
                        prop_assert!(constructed.distance(p) < 1e-9);
                    }
                }
                Err(e) => prop_assert!(matches!(e, GeometryError::MiquelAtInfinity | GeometryError::DegenerateScene(_))),
            }
        }

        #[test]
        fn cross_ratio_multiplicativity(
            ang in prop::array::uniform3(0.0..PI),
            v in prop::array::uniform3(0.5..3.0f64),
            mink in any::<bool>(),
        ) {
            let f = if mink { minkowski() } else { euclid() };
            let t = tol();
            let vp = pt(v[0], v[1], v[2]);
            let lines: Vec<HLine> = ang.iter().map(|a| {
                let dir = pt(a.cos(), a.sin(), -a.cos() - a.sin());
                join(&vp, &dir, &t).unwrap()
            }).collect();
            let (i, j) = circular_points(&f).unwrap();
            let (vi, vj) = (join(&vp, &i, &t).unwrap(), join(&vp, &j, &t).unwrap());
            let cr = |a: &HLine, b: &HLine| cross_ratio_lines(a, b, &vi, &vj, &t);
            let (Ok(gh), Ok(hk), Ok(gk)) = (cr(&lines[0], &lines[1]), cr(&lines[1], &lines[2]), cr(&lines[0], &lines[2])) else {
                return Ok(());
            };
            prop_assert!((gh * hk - gk).norm() <= 1e-8 * gk.norm().max(1.0));
        }

        #[test]
        fn triangle_cross_ratios_multiply_to_one(
            pts in prop::array::uniform3(prop::array::uniform3(0.1..3.0f64)),
            mink in any::<bool>(),
        ) {
            let f = if mink { minkowski() } else { euclid() };
            let [a, b, cc] = pts.map(|v| pt(v[0], v[1], v[2]));
            let area = Vector3::from(pts[0]).dot(&Vector3::from(pts[1]).cross(&Vector3::from(pts[2])));
            prop_assume!(area.abs() > 0.05);
            let ok = [(&a, &b, &cc), (&b, &cc, &a), (&cc, &a, &b)]
                .iter()
                .all(|(v, p, q)| angle_cross_ratio(v, p, q, &f).is_ok());
            prop_assume!(ok);
            let prod = triangle_product(&a, &b, &cc, &f);
            prop_assert!((prod - 1.0).norm() < 1e-8, "{}", prod);
        }

        #[test]
        fn inscribed_invariance_minkowski(s in prop::array::uniform4(-4.0..4.0f64)) {
            let k = [9.0, 1.0, 1.0];
            let f = minkowski();
            prop_assume!(s.iter().all(|x| x.abs() > 0.05 && (1.0 + x).abs() > 0.05));
            for i in 0..4 {
                for j in 0..i {
                    prop_assume!((s[i] - s[j]).abs() > 0.05);
                }
            }
            let circle = circum(&f);
            let [p, q, r1, r2] = s.map(|x| on_circum(k, x));
            match inscribed_angle_check(&circle, &p, &q, &r1, &r2, &f) {
                Ok(ok) => prop_assert!(ok),
                Err(e) => prop_assert!(matches!(e, GeometryError::IsotropicLeg | GeometryError::IsotropicPoint | GeometryError::DegenerateConstruction(_) | GeometryError::DegenerateQuadruple)),
            }
        }
    }
}
