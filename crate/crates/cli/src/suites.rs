//! Seeded verification suites. Trial `t` of suite `s` with seed `x` draws a
//! scenario from its own random stream and runs check `s` on it.

use std::time::{Duration, Instant};

use ckm_core::{
    angle_cross_ratio, circumcircle_through, circumconic_through, inscribed_cross_ratios, midpoints, normalize_point, perspector,
    tetragon_miquel_triple, tetragon_normalizers, theorem3_check, tilde_points, HPoint, PlaneKind,
    ReferenceFrame, TetragonScene,
};
use nalgebra::Vector3;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::checks::run_check;
use crate::error::{HarnessError, Result};
use crate::random::{rejection, round6, sample_lmn, sample_plane, trial_rng, MIN_RADICAND};
use crate::scenario::{triple, PlaneSpec, Scenario, SceneSpec};

pub const SUITE_NAMES: [&str; 8] = [
    "thm1",
    "thm2",
    "thm3",
    "affine",
    "lemma",
    "inscribed",
    "fixedpoint",
    "fundamentals",
];

const REGULAR: [PlaneKind; 2] = [PlaneKind::Elliptic, PlaneKind::Hyperbolic];
const ALL_KINDS: [PlaneKind; 5] = [
    PlaneKind::Elliptic,
    PlaneKind::Hyperbolic,
    PlaneKind::Euclidean,
    PlaneKind::Minkowski,
    PlaneKind::Galilean,
];

/// Half-width of the box `q` is drawn from in the fixed-point suite. Wider
/// boxes contain planes without a non-trivial fixed point.
pub const FIXED_POINT_Q_SPAN: f64 = 0.2;

fn pick<T: Copy>(items: &[T], trial: u64) -> T {
    items[(trial % items.len() as u64) as usize]
}

fn signed(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let x = rng.gen_range(lo..hi);
    if rng.gen::<bool>() {
        x
    } else {
        -x
    }
}

fn scenario(plane: PlaneSpec, scene: Option<SceneSpec>, seed: u64, check: &str) -> Scenario {
    Scenario {
        plane,
        scene,
        seed: Some(seed),
        checks: vec![check.to_owned()],
    }
}

fn quadrilateral(rng: &mut ChaCha8Rng, kind: PlaneKind) -> Option<(PlaneSpec, [f64; 3])> {
    let (plane, frame) = sample_plane(kind, rng)?;
    let lmn = sample_lmn(rng, &frame)?;
    Some((plane, lmn))
}

/// All normalizer radicands of the tetragon are bounded away from zero and
/// the Miquel triple and perspector exist.
fn tetragon_ok(frame: &ReferenceFrame, d: [f64; 3]) -> bool {
    let s = frame.structure();
    let [a, b, c] = d;
    let radicands = [
        Vector3::new(0.0, b, c),
        Vector3::new(a, 0.0, c),
        Vector3::new(a, b, 0.0),
        Vector3::new(a, b, c),
    ];
    if radicands.iter().any(|v| s.form(v).abs() < MIN_RADICAND * v.norm_squared()) {
        return false;
    }
    let Ok(scene) = TetragonScene::new(frame.clone(), d) else {
        return false;
    };
    tetragon_normalizers(frame, d).is_ok() && tetragon_miquel_triple(&scene).is_ok() && perspector(&scene).is_ok()
}

fn generic_d(rng: &mut ChaCha8Rng) -> [f64; 3] {
    [
        round6(rng.gen_range(0.2..2.0)),
        round6(signed(rng, 0.2, 2.0)),
        round6(signed(rng, 0.2, 2.0)),
    ]
}

/// A point `[x : s : 1]` on the circumcircle, flipped so that `d_A > 0`.
fn concyclic_d(rng: &mut ChaCha8Rng, frame: &ReferenceFrame) -> Option<[f64; 3]> {
    let m = frame.circum().real_matrix();
    let s = signed(rng, 0.1, 4.0);
    let lin = 2.0 * (m[(0, 1)] * s + m[(0, 2)]);
    let rest = m[(1, 1)] * s * s + 2.0 * m[(1, 2)] * s + m[(2, 2)];
    if lin.abs() < 1e-3 * m.amax() {
        return None;
    }
    let x = -rest / lin;
    let d = if x > 0.0 { [x, s, 1.0] } else { [-x, -s, -1.0] };
    (d[0] > 1e-3 && d[0].is_finite()).then_some(d)
}

fn thm3_draw(rng: &mut ChaCha8Rng, kind: PlaneKind, concyclic: bool) -> Option<(PlaneSpec, [f64; 3])> {
    let (plane, frame) = sample_plane(kind, rng)?;
    let d = if concyclic {
        concyclic_d(rng, &frame)?
    } else {
        let d = generic_d(rng);
        let v = Vector3::from(d);
        let m = frame.circum().real_matrix();
        if (v.transpose() * m * v)[0].abs() <= 1e-3 * m.amax() * v.norm_squared() {
            return None;
        }
        d
    };
    if !tetragon_ok(&frame, d) {
        return None;
    }
    let scene = TetragonScene::new(frame, d).ok()?;
    theorem3_check(&scene).ok()?;
    Some((plane, d))
}

/// Point of the k-circumcircle reached from `A` along the line `y = s z`.
fn on_circumcircle(k: [f64; 3], s: f64) -> Vector3<f64> {
    let w = k[1] + k[2] * s;
    Vector3::new(-k[0] * s, s * w, w)
}

fn inscribed_draw(rng: &mut ChaCha8Rng, kind: PlaneKind) -> Option<(PlaneSpec, Vec<[f64; 3]>)> {
    let (plane, frame) = sample_plane(kind, rng)?;
    let k = frame.k();
    let params: Vec<f64> = (0..4).map(|_| rng.gen_range(-4.0..4.0)).collect();
    for i in 0..4 {
        for j in 0..i {
            if (params[i] - params[j]).abs() < 0.05 {
                return None;
            }
        }
    }
    let mut pts = Vec::with_capacity(4);
    for s in &params {
        let v = on_circumcircle(k, *s);
        if v.sum().abs() < 1e-2 * v.abs().sum() || v.norm() < 1e-6 {
            return None;
        }
        pts.push(HPoint::from_real(&(v / v.norm())).ok()?);
    }
    let [p, q, r1, r2] = [pts[0], pts[1], pts[2], pts[3]];
    let circle = circumcircle_through(&p, &q, &r1, &frame).ok()?;
    let (k1, k2) = inscribed_cross_ratios(&circle, &p, &q, &r1, &r2, &frame).ok()?;
    let corners = [
        angle_cross_ratio(&p, &q, &r1, &frame).ok()?,
        angle_cross_ratio(&q, &r1, &p, &frame).ok()?,
        angle_cross_ratio(&r1, &p, &q, &frame).ok()?,
    ];
    let conditioned = |z: num_complex::Complex64| (1e-4..1e4).contains(&z.norm());
    if !conditioned(k1) || !conditioned(k2) || !corners.iter().all(|z| conditioned(*z)) {
        return None;
    }
    Some((plane, pts.iter().map(|p| p.re().into()).collect()))
}

fn fundamentals_draw(rng: &mut ChaCha8Rng, kind: PlaneKind) -> Option<(PlaneSpec, Vec<[f64; 3]>)> {
    let (plane, frame) = sample_plane(kind, rng)?;
    let s = frame.structure();
    let vs: Vec<Vector3<f64>> = (0..3)
        .map(|_| Vector3::from([(); 3].map(|_| round6(rng.gen_range(-2.0..2.0)))))
        .collect();
    for v in &vs {
        if v.norm() < 0.1 || s.form(v).abs() < 1e-3 * v.norm_squared() {
            return None;
        }
        if s.is_singular() && v.sum().abs() < 0.1 * v.abs().sum() {
            return None;
        }
    }
    if vs[0].cross(&vs[1]).dot(&vs[2]).abs() < 0.05 * vs.iter().map(|v| v.norm()).product::<f64>() {
        return None;
    }
    let pts: Vec<HPoint> = vs.iter().map(HPoint::from_real).collect::<std::result::Result<_, _>>().ok()?;
    let classes: Vec<i8> = pts
        .iter()
        .map(|p| normalize_point(p, s).map(|n| n.sign_class))
        .collect::<std::result::Result<_, _>>()
        .ok()?;
    if classes.iter().any(|c| *c != classes[0]) {
        return None;
    }
    midpoints(&pts[0], &pts[1], s).ok()?;
    circumconic_through(&pts[0], &pts[1], &pts[2], &frame).ok()?;
    Some((plane, vs.iter().map(|v| [v[0], v[1], v[2]]).collect()))
}

fn points_scene(pts: Vec<[f64; 3]>) -> Option<SceneSpec> {
    Some(SceneSpec::Points {
        points: pts.into_iter().map(triple).collect(),
    })
}

/// The scenario drawn for one trial of a suite.
pub fn trial_scenario(suite: &str, seed: u64, trial: u64) -> Result<Scenario> {
    let mut rng = trial_rng(seed, trial);
    let rng = &mut rng;
    let out = match suite {
        "thm1" | "affine" | "lemma" => {
            let kinds: &[PlaneKind] = match suite {
                "thm1" => &REGULAR,
                "affine" => &[PlaneKind::Euclidean, PlaneKind::Minkowski, PlaneKind::Galilean],
                _ => &[PlaneKind::Euclidean, PlaneKind::Minkowski],
            };
            let kind = pick(kinds, trial);
            let (plane, lmn) = rejection(rng, |r| {
                let (plane, lmn) = quadrilateral(r, kind)?;
                if suite == "lemma" {
                    let frame = plane.frame(&Default::default()).ok()?;
                    let tl = tilde_points(lmn, &frame).ok()?;
                    if tl.iter().any(|p| p.re().norm() < 1e-6) {
                        return None;
                    }
                }
                Some((plane, lmn))
            })?;
            scenario(plane, Some(SceneSpec::Quadrilateral { lmn: triple(lmn) }), seed, suite)
        }
        "thm2" => {
            let kind = pick(&REGULAR, trial);
            let (plane, d) = rejection(rng, |r| {
                let (plane, frame) = sample_plane(kind, r)?;
                let d = generic_d(r);
                tetragon_ok(&frame, d).then_some((plane, d))
            })?;
            scenario(plane, Some(SceneSpec::Tetragon { d: triple(d) }), seed, suite)
        }
        "thm3" => {
            let kind = pick(&REGULAR, trial / 2);
            let (plane, d) = rejection(rng, |r| thm3_draw(r, kind, trial % 2 == 0))?;
            scenario(plane, Some(SceneSpec::Tetragon { d: triple(d) }), seed, suite)
        }
        "fixedpoint" => {
            let q = [(); 3].map(|_| round6(rng.gen_range(-FIXED_POINT_Q_SPAN..FIXED_POINT_Q_SPAN)));
            scenario(PlaneSpec::regular(PlaneKind::Elliptic, q), None, seed, suite)
        }
        "inscribed" => {
            let kind = pick(&[PlaneKind::Euclidean, PlaneKind::Minkowski], trial);
            let (plane, pts) = rejection(rng, |r| inscribed_draw(r, kind))?;
            scenario(plane, points_scene(pts), seed, suite)
        }
        "fundamentals" => {
            let kind = pick(&ALL_KINDS, trial);
            let (plane, pts) = rejection(rng, |r| fundamentals_draw(r, kind))?;
            scenario(plane, points_scene(pts), seed, suite)
        }
        other => return Err(HarnessError::UnknownSuite(other.to_owned())),
    };
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FailureRecord {
    pub trial: u64,
    pub residual: f64,
    pub message: String,
    /// Absent when the scenario could not be generated.
    pub scenario: Option<Scenario>,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: u64,
    pub seed: u64,
    pub failures: Vec<FailureRecord>,
    pub max_residual: f64,
    pub wall_time: Duration,
}

/// Residuals are written as decimal strings; non-finite values as `"inf"`
/// or `"nan"`.
pub fn format_residual(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        "inf".into()
    } else {
        format!("{x:e}")
    }
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// One JSON line per failure followed by a summary line. The wall time
    /// is left out so that reports are reproducible byte for byte.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for f in &self.failures {
            let scenario = f
                .scenario
                .as_ref()
                .map(|s| serde_json::to_value(s).expect("scenarios serialize"))
                .unwrap_or(Value::Null);
            let rec = json!({
                "record": "failure",
                "suite": self.suite,
                "seed": self.seed,
                "trial": f.trial,
                "residual": format_residual(f.residual),
                "message": f.message,
                "scenario": scenario,
            });
            out.push_str(&rec.to_string());
            out.push('\n');
        }
        let summary = json!({
            "record": "summary",
            "suite": self.suite,
            "seed": self.seed,
            "trials": self.trials,
            "failures": self.failures.len(),
            "max_residual": format_residual(self.max_residual),
        });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }
}

struct TrialOutcome {
    residual: f64,
    failure: Option<FailureRecord>,
}

fn run_trial(suite: &str, seed: u64, trial: u64) -> TrialOutcome {
    let fail = |residual: f64, message: String, scenario: Option<Scenario>| TrialOutcome {
        residual,
        failure: Some(FailureRecord {
            trial,
            residual,
            message,
            scenario,
        }),
    };
    let scenario = match trial_scenario(suite, seed, trial) {
        Ok(s) => s,
        Err(e) => return fail(f64::INFINITY, e.to_string(), None),
    };
    match run_check(suite, &scenario) {
        Ok(o) if o.passed => TrialOutcome {
            residual: o.residual,
            failure: None,
        },
        Ok(o) => {
            let msg = if o.message.is_empty() {
                format!("residual {} above tolerance", format_residual(o.residual))
            } else {
                o.message
            };
            fail(o.residual, msg, Some(scenario))
        }
        Err(e) => fail(f64::INFINITY, e.to_string(), Some(scenario)),
    }
}

/// Runs `trials` trials of a suite on `jobs` threads (`0` picks the rayon
/// default). The report does not depend on `jobs`.
pub fn run_suite(suite: &str, trials: u64, seed: u64, jobs: usize) -> Result<SuiteReport> {
    if !SUITE_NAMES.contains(&suite) {
        return Err(HarnessError::UnknownSuite(suite.to_owned()));
    }
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| HarnessError::Io(std::io::Error::other(e.to_string())))?;
    let outcomes: Vec<TrialOutcome> =
        pool.install(|| (0..trials).into_par_iter().map(|t| run_trial(suite, seed, t)).collect());
    let max_residual = outcomes.iter().map(|o| o.residual).fold(0.0, f64::max);
    let failures = outcomes.into_iter().filter_map(|o| o.failure).collect();
    Ok(SuiteReport {
        suite: suite.to_owned(),
        trials,
        seed,
        failures,
        max_residual,
        wall_time: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{emit_scenario, parse_scenario};

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(run_suite("nope", 1, 0, 1), Err(HarnessError::UnknownSuite(_))));
        assert!(matches!(trial_scenario("nope", 0, 0), Err(HarnessError::UnknownSuite(_))));
    }

    #[test]
    fn every_suite_generates_round_trippable_scenarios() {
        for suite in SUITE_NAMES {
            for trial in 0..6 {
                let s = trial_scenario(suite, 11, trial).unwrap();
                let text = emit_scenario(&s);
                assert_eq!(emit_scenario(&parse_scenario(&text).unwrap()), text, "{suite}");
            }
        }
    }

    #[test]
    fn short_runs_pass() {
        for suite in SUITE_NAMES {
            let r = run_suite(suite, 40, 5, 2).unwrap();
            assert!(r.passed(), "{}", r.to_jsonl());
        }
    }

    #[test]
    fn report_does_not_depend_on_jobs() {
        let a = run_suite("thm1", 30, 3, 1).unwrap().to_jsonl();
        let b = run_suite("thm1", 30, 3, 4).unwrap().to_jsonl();
        assert_eq!(a, b);
    }

    #[test]
    fn failures_carry_the_scenario() {
        let r = SuiteReport {
            suite: "thm1".into(),
            trials: 1,
            seed: 0,
            failures: vec![FailureRecord {
                trial: 0,
                residual: 1.0,
                message: "x".into(),
                scenario: Some(trial_scenario("thm1", 0, 0).unwrap()),
            }],
            max_residual: 1.0,
            wall_time: Duration::ZERO,
        };
        let text = r.to_jsonl();
        let first: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(first["record"], "failure");
        let back = parse_scenario(&first["scenario"].to_string()).unwrap();
        assert_eq!(back, trial_scenario("thm1", 0, 0).unwrap());
    }
}
