use nalgebra::{Matrix2, Vector2, Vector3};

use crate::cayley_klein::PlaneKind;
use crate::circles::ReferenceFrame;
use crate::error::{GeometryError, Result};
use crate::projective::{incidence, on_conic, HLine, HPoint};

/// Reciprocal normalizers of the diagonal points `P1 = (0, d_B, d_C)`,
/// `P2 = (d_A, 0, d_C)`, `P3 = (d_A, d_B, 0)` and of `D` itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetragonNormalizers {
    /// Carries the sign of `d_B`.
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

/// Reference triangle `ABC` plus a fourth point `D = [d_A:d_B:d_C]`, `d_A > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TetragonScene {
    frame: ReferenceFrame,
    d: [f64; 3],
    normalizers: TetragonNormalizers,
}

fn regular_only(frame: &ReferenceFrame) -> Result<()> {
    if frame.structure().is_singular() {
        return Err(GeometryError::WrongPlaneKind { expected: "regular" });
    }
    Ok(())
}

fn validate_d(d: [f64; 3]) -> Result<()> {
    if !d.iter().all(|x| x.is_finite()) {
        return Err(GeometryError::DegenerateTetragon("non-finite coordinates".into()));
    }
    if d[0] <= 0.0 {
        return Err(GeometryError::DegenerateTetragon("d_A must be positive".into()));
    }
    let top = d.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if d[1].abs() <= 1e-12 * top || d[2].abs() <= 1e-12 * top {
        return Err(GeometryError::DegenerateTetragon("D lies on a side line".into()));
    }
    Ok(())
}

/// `alpha = sgn(d_B)/sqrt|phi(P1)|`, `beta = 1/sqrt|phi(P2)|`,
/// `gamma = 1/sqrt|phi(P3)|`, `delta = 1/sqrt|phi(D)|`.
pub fn tetragon_normalizers(frame: &ReferenceFrame, d: [f64; 3]) -> Result<TetragonNormalizers> {
    regular_only(frame)?;
    let s = frame.structure();
    let [a, b, c] = d;
    let recip = |v: Vector3<f64>, err: GeometryError| -> Result<f64> {
        if s.is_isotropic(&v) {
            return Err(err);
        }
        Ok(1.0 / s.form(&v).abs().sqrt())
    };
    let diag = || GeometryError::IsotropicDiagonalPoint;
    Ok(TetragonNormalizers {
        alpha: b.signum() * recip(Vector3::new(0.0, b, c), diag())?,
        beta: recip(Vector3::new(a, 0.0, c), diag())?,
        gamma: recip(Vector3::new(a, b, 0.0), diag())?,
        delta: recip(Vector3::new(a, b, c), GeometryError::IsotropicPoint)?,
    })
}

impl TetragonScene {
    pub fn new(frame: ReferenceFrame, d: [f64; 3]) -> Result<Self> {
        regular_only(&frame)?;
        validate_d(d)?;
        let normalizers = tetragon_normalizers(&frame, d)?;
        Ok(Self { frame, d, normalizers })
    }

    pub fn frame(&self) -> &ReferenceFrame {
        &self.frame
    }

    pub fn d(&self) -> [f64; 3] {
        self.d
    }

    pub fn point_d(&self) -> HPoint {
        HPoint::from_real(&Vector3::from(self.d)).expect("validated")
    }

    pub fn normalizers(&self) -> TetragonNormalizers {
        self.normalizers
    }

    /// `P1 = AD x BC`, `P2 = BD x CA`, `P3 = CD x AB`.
    pub fn diagonal_points(&self) -> [HPoint; 3] {
        let [a, b, c] = self.d;
        [
            HPoint::real(0.0, b, c).unwrap(),
            HPoint::real(a, 0.0, c).unwrap(),
            HPoint::real(a, b, 0.0).unwrap(),
        ]
    }

    /// Sign classes of `A, B, C, D, P1, P2, P3` all agree (hyperbolic
    /// planes only have two classes).
    fn classes(&self, which: &[usize]) -> bool {
        let s = self.frame.structure();
        if s.kind() != PlaneKind::Hyperbolic {
            return true;
        }
        let [a, b, c] = self.d;
        let pts = [
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(0.0, 1.0, 0.0),
            Vector3::new(0.0, 0.0, 1.0),
            Vector3::new(a, b, c),
            Vector3::new(0.0, b, c),
            Vector3::new(a, 0.0, c),
            Vector3::new(a, b, 0.0),
        ];
        let signs: Vec<f64> = which.iter().map(|&i| s.form(&pts[i]).signum()).collect();
        signs.iter().all(|x| *x == signs[0])
    }

    fn mq_abcd(&self) -> Vector3<f64> {
        let [da, db, dc] = self.d;
        let TetragonNormalizers { alpha, gamma, delta, .. } = self.normalizers;
        Vector3::new(
            da * delta * gamma * (alpha * (db + dc) - 1.0),
            db * (delta * (db * alpha * gamma - alpha - gamma) + alpha * gamma),
            dc * delta * alpha * (gamma * (da + db) - 1.0),
        )
    }

    fn mq_abdc(&self) -> Vector3<f64> {
        let [da, db, dc] = self.d;
        let TetragonNormalizers { beta, gamma, delta, .. } = self.normalizers;
        Vector3::new(
            da * (delta * (da * beta * gamma - beta - gamma) + beta * gamma),
            db * delta * gamma * (beta * (da + dc) - 1.0),
            dc * delta * beta * (gamma * (da + db) - 1.0),
        )
    }

    fn mq_adbc(&self) -> Vector3<f64> {
        let [da, db, dc] = self.d;
        let TetragonNormalizers { alpha, beta, delta, .. } = self.normalizers;
        Vector3::new(
            da * delta * beta * (alpha * (db + dc) - 1.0),
            db * delta * alpha * (beta * (da + dc) - 1.0),
            dc * (delta * (dc * alpha * beta - alpha - beta) + alpha * beta),
        )
    }
}

fn point_of(v: Vector3<f64>, what: &str) -> Result<HPoint> {
    HPoint::from_real(&v).map_err(|_| GeometryError::DegenerateTetragon(format!("{what} vanishes")))
}

/// Miquel-Steiner triangle `(Mq_A, Mq_B, Mq_C)`: the Miquel-Steiner points
/// of the quadrilaterals `ABDC`, `ABCD` and `ADBC`.
pub fn tetragon_miquel_triple(scene: &TetragonScene) -> Result<[HPoint; 3]> {
    if !scene.classes(&[0, 1, 2, 3, 4, 5, 6]) {
        return Err(GeometryError::NotCongruent);
    }
    Ok([
        point_of(scene.mq_abdc(), "Mq_ABDC")?,
        point_of(scene.mq_abcd(), "Mq_ABCD")?,
        point_of(scene.mq_adbc(), "Mq_ADBC")?,
    ])
}

/// Perspector `Q` of the reference triangle and the Miquel-Steiner triangle.
pub fn perspector(scene: &TetragonScene) -> Result<HPoint> {
    if !scene.classes(&[0, 1, 2, 3, 4, 5, 6]) {
        return Err(GeometryError::NotCongruent);
    }
    let [da, db, dc] = scene.d;
    let TetragonNormalizers { alpha, beta, gamma, .. } = scene.normalizers;
    point_of(
        Vector3::new(
            da * beta * gamma * (alpha * (db + dc) - 1.0),
            db * alpha * gamma * (beta * (da + dc) - 1.0),
            dc * alpha * beta * (gamma * (da + db) - 1.0),
        ),
        "perspector",
    )
}

/// The map `D -> Q(D)`.
pub fn miquel_transformation(frame: &ReferenceFrame, d: &HPoint) -> Result<HPoint> {
    let mut v = d.re();
    if v[0] < 0.0 {
        v = -v;
    }
    perspector(&TetragonScene::new(frame.clone(), [v[0], v[1], v[2]])?)
}

const FIXED_POINT_ITERATIONS: usize = 100;
const FIXED_POINT_RESTARTS: usize = 20;
const FIXED_POINT_RESIDUAL: f64 = 1e-12;
const FIXED_POINT_SELF_MAP: f64 = 1e-7;

/// Residuals of `d_A - d_B = 1/beta - 1/alpha`, `d_A - d_C = 1/gamma - 1/alpha`
/// in the gauge `d_A = 3 - d_B - d_C`.
fn fixed_point_residual(frame: &ReferenceFrame, x: &Vector2<f64>) -> Option<Vector2<f64>> {
    let s = frame.structure();
    let (db, dc) = (x[0], x[1]);
    let da = 3.0 - db - dc;
    let root = |v: Vector3<f64>| s.form(&v).abs().sqrt();
    let ra = db.signum() * root(Vector3::new(0.0, db, dc));
    let rb = root(Vector3::new(da, 0.0, dc));
    let rc = root(Vector3::new(da, db, 0.0));
    let r = Vector2::new(da - db - (rb - ra), da - dc - (rc - ra));
    r.iter().all(|v| v.is_finite()).then_some(r)
}

fn newton(frame: &ReferenceFrame, start: Vector2<f64>) -> Option<Vector2<f64>> {
    let mut x = start;
    let mut fx = fixed_point_residual(frame, &x)?;
    for _ in 0..FIXED_POINT_ITERATIONS {
        if fx.amax() <= FIXED_POINT_RESIDUAL {
            return Some(x);
        }
        let mut jac = Matrix2::zeros();
        for j in 0..2 {
            let h = 1e-7 * x[j].abs().max(1.0);
            let mut xp = x;
            xp[j] += h;
            let mut xm = x;
            xm[j] -= h;
            let col = (fixed_point_residual(frame, &xp)? - fixed_point_residual(frame, &xm)?) / (2.0 * h);
            jac.set_column(j, &col);
        }
        let step = jac.lu().solve(&(-fx))?;
        let mut t = 1.0;
        loop {
            let trial = x + step * t;
            if let Some(ft) = fixed_point_residual(frame, &trial) {
                if ft.amax() < fx.amax() || t < 1e-4 {
                    x = trial;
                    fx = ft;
                    break;
                }
            }
            t *= 0.5;
            if t < 1e-6 {
                return None;
            }
        }
    }
    (fx.amax() <= FIXED_POINT_RESIDUAL).then_some(x)
}

/// Fixed point of the Miquel-Steiner transformation.
///
/// Newton iteration with a central-difference Jacobian from `G`, then from
/// deterministic restart points spiralling around `G`. Solutions on a side
/// line (the trivial `D = A` branch) or whose self-map check fails are
/// discarded.
pub fn miquel_fixed_point(frame: &ReferenceFrame) -> Result<HPoint> {
    regular_only(frame)?;
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    for attempt in 0..=FIXED_POINT_RESTARTS {
        let start = if attempt == 0 {
            Vector2::new(1.0, 1.0)
        } else {
            let r = 0.25 * (1.0 + attempt as f64 / 4.0);
            let a = golden * attempt as f64;
            Vector2::new(1.0 + r * a.cos(), 1.0 + r * a.sin())
        };
        let Some(x) = newton(frame, start) else { continue };
        let d = [3.0 - x[0] - x[1], x[0], x[1]];
        if validate_d(d).is_err() || d[1].abs() < 1e-6 || d[2].abs() < 1e-6 {
            continue;
        }
        let Ok(scene) = TetragonScene::new(frame.clone(), d) else { continue };
        let p = scene.point_d();
        match perspector(&scene) {
            Ok(q) if q.distance(&p) <= FIXED_POINT_SELF_MAP => return Ok(p),
            _ => continue,
        }
    }
    Err(GeometryError::NoConvergence {
        iterations: FIXED_POINT_ITERATIONS,
        restarts: FIXED_POINT_RESTARTS,
    })
}

/// Outcome of the concyclicity test for `D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem3Record {
    /// `D` lies on the circumcircle of `ABC`.
    pub concyclic: bool,
    /// `Mq_ABCD` lies on the diagonal line `(d_B d_C, -d_A d_C, d_A d_B)`.
    pub on_diagonal: bool,
    /// `|delta (d_A + d_B + d_C)|`.
    pub delta_sum: f64,
    /// Normalized incidence residual behind `on_diagonal`.
    pub diagonal_residual: f64,
}

impl Theorem3Record {
    /// The three predicates agree.
    pub fn consistent(&self, eps: f64) -> bool {
        let unit = (self.delta_sum - 1.0).abs() <= eps;
        self.concyclic == unit && unit == self.on_diagonal
    }
}

/// Evaluates the three equivalent conditions for `D` being concyclic with
/// `A, B, C`.
pub fn theorem3_check(scene: &TetragonScene) -> Result<Theorem3Record> {
    let tol = scene.frame.tol();
    let [da, db, dc] = scene.d;
    let signed = scene.normalizers.delta * (da + db + dc);
    if !scene.classes(&[0, 1, 2, 3, 4, 6]) || (signed + 1.0).abs() <= tol.scaled(100.0).eps {
        return Err(GeometryError::MiquelPointAbsent);
    }
    let concyclic = on_conic(scene.frame.circum(), &scene.point_d(), tol);
    let diagonal = HLine::real(db * dc, -da * dc, da * db)?;
    let designated = point_of(scene.mq_abcd(), "Mq_ABCD")?;
    let diagonal_residual = incidence(&diagonal, &designated);
    Ok(Theorem3Record {
        concyclic,
        on_diagonal: diagonal_residual <= tol.scaled(10.0).eps,
        delta_sum: signed.abs(),
        diagonal_residual,
    })
}
