//! Per-scenario checks. Each suite draws scenarios and runs the check of the
//! same name on them; a failure record therefore re-runs with
//! `ckm verify --scenario`.

use ckm_core::{
    angle_cross_ratio, circular_points, circumcircle_through, circumconic_through, incidence, inscribed_cross_ratios, join,
    lemma_residuals, meet, midpoints, miquel_fixed_point, miquel_point_affine, miquel_point_radical,
    miquel_point_regular, miquel_transformation, normalize_point, perspector, polar, radical_residual,
    tetragon_miquel_triple, tetragon_normalizers, theorem3_check, tilde_points, Conic, GeometryError, HLine,
    HPoint, QuadrilateralScene, ReferenceFrame, TetragonScene, Tolerance,
};
use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{HarnessError, Result};
use crate::scenario::{values, Scenario, SceneSpec};

pub const THM1_TOL: f64 = 1e-8;
pub const AFFINE_TOL: f64 = 1e-9;
pub const THM2_TOL: f64 = 1e-8;
pub const THM3_DELTA_TOL: f64 = 1e-9;
pub const THM3_DIAGONAL_TOL: f64 = 1e-8;
pub const FIXED_POINT_EQUATION_TOL: f64 = 1e-10;
pub const FIXED_POINT_SELF_MAP_TOL: f64 = 1e-7;
pub const LEMMA_TOL: f64 = 1e-9;
pub const INSCRIBED_TOL: f64 = 1e-8;
pub const FUNDAMENTALS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub check: String,
    pub passed: bool,
    /// Largest normalized residual; infinite when the check hit an error.
    pub residual: f64,
    pub message: String,
}

struct Measured {
    residual: f64,
    limit: f64,
    note: String,
}

impl Measured {
    fn new(residual: f64, limit: f64) -> Self {
        Self {
            residual,
            limit,
            note: String::new(),
        }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

fn scene_of<'a>(scenario: &'a Scenario, check: &str, ty: &str) -> Result<&'a SceneSpec> {
    match &scenario.scene {
        Some(s) if s.type_name() == ty => Ok(s),
        _ => Err(HarnessError::schema("scene", format!("check `{check}` needs a {ty} scene"))),
    }
}

fn lmn_of(scenario: &Scenario, check: &str) -> Result<[f64; 3]> {
    match scene_of(scenario, check, "quadrilateral")? {
        SceneSpec::Quadrilateral { lmn } => Ok(values(lmn)),
        _ => unreachable!(),
    }
}

fn d_of(scenario: &Scenario, check: &str) -> Result<[f64; 3]> {
    match scene_of(scenario, check, "tetragon")? {
        SceneSpec::Tetragon { d } => Ok(values(d)),
        _ => unreachable!(),
    }
}

fn points_of(scenario: &Scenario, check: &str, min: usize) -> Result<Vec<HPoint>> {
    let pts = scene_of(scenario, check, "points")?
        .points()
        .ok_or_else(|| HarnessError::schema("scene.points", "zero point"))?;
    if pts.len() < min {
        return Err(HarnessError::schema(
            "scene.points",
            format!("check `{check}` needs at least {min} points"),
        ));
    }
    Ok(pts)
}

/// `|v^T m v| / (scale(m) |v|^2)`.
pub fn conic_residual(conic: &Conic, p: &HPoint) -> f64 {
    let v = p.coords();
    conic.eval(v).norm() / (conic.scale() * v.norm_squared())
}

fn thm1(frame: ReferenceFrame, lmn: [f64; 3]) -> std::result::Result<Measured, GeometryError> {
    let scene = QuadrilateralScene::new(frame, lmn)?;
    let closed = miquel_point_regular(&scene)?.point;
    let radical = miquel_point_radical(&scene)?;
    let r = closed.distance(&radical).max(radical_residual(&scene, &closed)?);
    Ok(Measured::new(r, THM1_TOL))
}

fn affine(frame: ReferenceFrame, lmn: [f64; 3]) -> std::result::Result<Measured, GeometryError> {
    let res = miquel_point_affine(lmn, &frame)?;
    let scene = QuadrilateralScene::new(frame, lmn)?;
    let r = scene
        .circles()?
        .iter()
        .map(|c| conic_residual(c, &res.point))
        .fold(0.0, f64::max);
    Ok(Measured::new(r, AFFINE_TOL).note(format!("contact={:?}", res.contact)))
}

fn thm2(frame: ReferenceFrame, d: [f64; 3]) -> std::result::Result<Measured, GeometryError> {
    let tol = *frame.tol();
    let scene = TetragonScene::new(frame, d)?;
    let [mq_a, mq_b, mq_c] = tetragon_miquel_triple(&scene)?;
    let q = perspector(&scene)?;
    let [a, b, c] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]].map(|v| HPoint::real(v[0], v[1], v[2]).unwrap());
    let la = join(&a, &mq_a, &tol)?;
    let lb = join(&b, &mq_b, &tol)?;
    let lc = join(&c, &mq_c, &tol)?;
    let x = meet(&la, &lb, &tol)?;
    let r = x.distance(&q).max(incidence(&lc, &q)).max(incidence(&lc, &x));
    Ok(Measured::new(r, THM2_TOL))
}

fn thm3(frame: ReferenceFrame, d: [f64; 3]) -> std::result::Result<Measured, GeometryError> {
    let scene = TetragonScene::new(frame, d)?;
    let rec = theorem3_check(&scene)?;
    let note = format!("concyclic={} on_diagonal={}", rec.concyclic, rec.on_diagonal);
    if !rec.consistent(THM3_DELTA_TOL) {
        return Ok(Measured::new(f64::INFINITY, 0.0).note(format!("predicates disagree: {note}")));
    }
    let r = if rec.concyclic {
        let delta = (rec.delta_sum - 1.0).abs();
        let diag = rec.diagonal_residual;
        // both parts must pass their own bound; report the worse ratio
        if delta > THM3_DELTA_TOL || diag > THM3_DIAGONAL_TOL {
            return Ok(Measured::new(delta.max(diag), 0.0).note(note));
        }
        delta.max(diag)
    } else {
        0.0
    };
    Ok(Measured::new(r, THM3_DIAGONAL_TOL).note(note))
}

fn fixedpoint(frame: ReferenceFrame) -> std::result::Result<Measured, GeometryError> {
    let p = miquel_fixed_point(&frame)?;
    let v = p.re();
    let v = v * (3.0 / v.sum());
    let n = tetragon_normalizers(&frame, [v[0], v[1], v[2]])?;
    let e1 = v[0] - v[1] - (1.0 / n.beta - 1.0 / n.alpha);
    let e2 = v[0] - v[2] - (1.0 / n.gamma - 1.0 / n.alpha);
    let eq = e1.abs().max(e2.abs());
    let image = miquel_transformation(&frame, &p)?;
    let self_map = image.distance(&p);
    let note = format!("D*={p} equations={eq:e} self_map={self_map:e}");
    if eq > FIXED_POINT_EQUATION_TOL || self_map > FIXED_POINT_SELF_MAP_TOL {
        return Ok(Measured::new(eq.max(self_map), 0.0).note(note));
    }
    Ok(Measured::new(eq.max(self_map), FIXED_POINT_SELF_MAP_TOL).note(note))
}

fn lemma(frame: ReferenceFrame, lmn: [f64; 3]) -> std::result::Result<Measured, GeometryError> {
    let tl = tilde_points(lmn, &frame)?;
    let rows = lemma_residuals(&tl, &frame)?;
    let verdicts: Vec<bool> = rows.iter().map(|r| r.iter().all(|x| *x <= LEMMA_TOL)).collect();
    let r = rows.iter().flatten().fold(0.0f64, |a, b| a.max(*b));
    let m = Measured::new(r, LEMMA_TOL);
    if verdicts.iter().any(|v| *v != verdicts[0]) {
        return Ok(m.note(format!("probe dependent verdicts {verdicts:?}")));
    }
    Ok(m)
}

fn triangle_product(a: &HPoint, b: &HPoint, c: &HPoint, frame: &ReferenceFrame) -> std::result::Result<Complex64, GeometryError> {
    Ok(angle_cross_ratio(a, b, c, frame)? * angle_cross_ratio(b, c, a, frame)? * angle_cross_ratio(c, a, b, frame)?)
}

fn inscribed(frame: ReferenceFrame, pts: &[HPoint]) -> std::result::Result<Measured, GeometryError> {
    let [p, q, r1, r2] = [pts[0], pts[1], pts[2], pts[3]];
    let circle = circumcircle_through(&p, &q, &r1, &frame)?;
    let (k1, k2) = inscribed_cross_ratios(&circle, &p, &q, &r1, &r2, &frame)?;
    let equal = (k1 - k2).norm() / k1.norm().max(k2.norm());
    let inverse = (k1 * k2 - 1.0).norm();
    let product = (triangle_product(&p, &q, &r1, &frame)? - 1.0).norm();
    let branch = if equal <= inverse { "equal" } else { "inverse" };
    Ok(Measured::new(equal.min(inverse).max(product), INSCRIBED_TOL).note(format!("branch={branch}")))
}

fn fundamentals(frame: ReferenceFrame, pts: &[HPoint]) -> std::result::Result<Measured, GeometryError> {
    let s = frame.structure();
    let tol = frame.tol();
    let mut worst = 0.0f64;
    let mut record = |r: f64| worst = worst.max(if r.is_nan() { f64::INFINITY } else { r });

    for p in pts {
        let a = normalize_point(p, s)?;
        let b = normalize_point(&a.point(), s)?;
        let same_class = if a.sign_class == b.sign_class { 0.0 } else { f64::INFINITY };
        record(((a.v - b.v).norm() / a.v.norm()).max(same_class));
    }

    let (p, q) = (&pts[0], &pts[1]);
    let (a, b) = (normalize_point(p, s)?, normalize_point(q, s)?);
    let mids = midpoints(p, q, s)?;
    if s.is_singular() {
        let k = s.k().expect("singular planes carry k");
        let kform = |v: &Vector3<f64>| k[0] * v[1] * v[2] + k[1] * v[2] * v[0] + k[2] * v[0] * v[1];
        let affine = |v: Vector3<f64>| v / v.sum();
        // one of the two lies on the line at infinity
        let (mp, mm) = (mids.m_plus.re(), mids.m_minus.re());
        let finite = |v: &Vector3<f64>| v.sum().abs() / v.abs().sum();
        let m = affine(if finite(&mp) >= finite(&mm) { mp } else { mm });
        let (dp, dq) = (m - affine(a.v), m - affine(b.v));
        let (fp, fq) = (kform(&dp), kform(&dq));
        let kscale = k.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        record((fp - fq).abs() / (kscale * (dp.norm_squared() + dq.norm_squared())));
    } else {
        for m in [mids.m_plus, mids.m_minus] {
            let mv = m.re();
            let (bp, bq) = (s.bilinear(&mv, &a.v), s.bilinear(&mv, &b.v));
            let scale = s.phi_matrix().amax() * mv.norm() * (a.v.norm() + b.v.norm());
            record((bp.abs() - bq.abs()).abs() / scale);
        }
    }

    let circle = circumconic_through(&pts[0], &pts[1], &pts[2], &frame)?;
    for p in &pts[..3] {
        record(conic_residual(&circle, p));
    }

    if s.is_singular() {
        let (i, j) = circular_points(&frame)?;
        record(conic_residual(&circle, &i).max(conic_residual(&circle, &j)));
    } else {
        let o = frame.circumcenter();
        let tripolar = HLine::real(1.0, 1.0, 1.0)?;
        let from_circum = polar(frame.circum(), o, tol)?;
        let from_absolute = polar(&s.phi(), o, tol)?;
        record(from_circum.distance(&tripolar).max(from_absolute.distance(&tripolar)));
    }
    Ok(Measured::new(worst, FUNDAMENTALS_TOL))
}

/// Runs one named check on a scenario. Geometry errors count as failures;
/// missing or mismatched scene data is an input error.
pub fn run_check(name: &str, scenario: &Scenario) -> Result<CheckOutcome> {
    let tol = Tolerance::default();
    let frame = scenario.plane.frame(&tol)?;
    let measured = match name {
        "thm1" => thm1(frame, lmn_of(scenario, name)?),
        "affine" => affine(frame, lmn_of(scenario, name)?),
        "thm2" => thm2(frame, d_of(scenario, name)?),
        "thm3" => thm3(frame, d_of(scenario, name)?),
        "fixedpoint" => fixedpoint(frame),
        "lemma" => lemma(frame, lmn_of(scenario, name)?),
        "inscribed" => inscribed(frame, &points_of(scenario, name, 4)?),
        "fundamentals" => fundamentals(frame, &points_of(scenario, name, 3)?),
        other => return Err(HarnessError::UnknownSuite(other.to_owned())),
    };
    Ok(match measured {
        Ok(m) => CheckOutcome {
            check: name.to_owned(),
            passed: m.residual.is_finite() && m.residual <= m.limit,
            residual: m.residual,
            message: m.note,
        },
        Err(e) => CheckOutcome {
            check: name.to_owned(),
            passed: false,
            residual: f64::INFINITY,
            message: e.to_string(),
        },
    })
}

/// Runs every check listed in the scenario.
pub fn run_checks(scenario: &Scenario) -> Result<Vec<CheckOutcome>> {
    scenario.checks.iter().map(|c| run_check(c, scenario)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{triple, PlaneSpec};
    use ckm_core::PlaneKind;

    fn scenario(plane: PlaneSpec, scene: Option<SceneSpec>, check: &str) -> Scenario {
        Scenario {
            plane,
            scene,
            seed: None,
            checks: vec![check.into()],
        }
    }

    fn quad(lmn: [f64; 3]) -> Option<SceneSpec> {
        Some(SceneSpec::Quadrilateral { lmn: triple(lmn) })
    }

    #[test]
    fn anchors_pass() {
        let q0 = PlaneSpec::regular(PlaneKind::Elliptic, [0.0; 3]);
        let unit = PlaneSpec::lemoine(PlaneKind::Euclidean, [1.0, 1.0, 1.0]);
        let cases = [
            scenario(q0.clone(), quad([1.0, 1.0, 1.0]), "thm1"),
            scenario(unit.clone(), quad([1.0, 2.0, 3.0]), "affine"),
            scenario(unit, quad([1.0, 2.0, 3.0]), "lemma"),
            scenario(q0.clone(), Some(SceneSpec::Tetragon { d: triple([2.0, 2.0, -1.0]) }), "thm3"),
            scenario(q0.clone(), Some(SceneSpec::Tetragon { d: triple([1.0, 1.0, 1.0]) }), "thm2"),
            scenario(q0, None, "fixedpoint"),
        ];
        for s in &cases {
            let out = run_checks(s).unwrap();
            assert!(out[0].passed, "{out:?}");
        }
    }

    #[test]
    fn wrong_scene_is_an_input_error() {
        let s = scenario(PlaneSpec::regular(PlaneKind::Elliptic, [0.0; 3]), None, "thm1");
        assert!(matches!(run_checks(&s), Err(HarnessError::Schema { .. })));
    }

    #[test]
    fn geometry_errors_fail_the_check() {
        // l = m: the affine closed form is undefined
        let s = scenario(PlaneSpec::lemoine(PlaneKind::Euclidean, [1.0, 1.0, 1.0]), quad([1.0, 1.0, 2.0]), "affine");
        let out = run_checks(&s).unwrap();
        assert!(!out[0].passed);
        assert!(out[0].residual.is_infinite());
    }
}
