//! Command-line interface. Exit codes: 0 success, 1 verification failure,
//! 2 input error.

use std::io::Write;
use std::path::{Path, PathBuf};

use ckm_core::{
    miquel_point_affine, miquel_point_of_lines, miquel_point_regular, perspector, tetragon_miquel_triple,
    theorem3_check, HPoint, QuadrilateralScene, ReferenceFrame, TetragonScene, Tolerance,
};
use clap::{Parser, Subcommand};
use nalgebra::Vector3;
use serde_json::{json, Value};

use crate::checks::run_checks;
use crate::error::{HarnessError, Result};
use crate::scenario::{parse_plane, parse_scenario, values, PlaneSpec, Scenario, SceneSpec};
use crate::suites::{format_residual, run_suite};
use crate::svg::{emit_svg, ChartKind, FigureOptions, DEFAULT_SAMPLES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ckm", version, about = "Miquel-Steiner constructions in Cayley-Klein planes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a plane given as a file or as inline JSON.
    Classify {
        #[arg(long)]
        plane: String,
    },
    /// Miquel-Steiner point of a quadrilateral or four-line scene.
    Miquel {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Miquel triple, perspector and concyclicity test of a tetragon scene.
    Tetragon {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Run a seeded suite, or re-run the checks of one scenario.
    Verify {
        #[arg(long, conflicts_with = "scenario", required_unless_present = "scenario")]
        suite: Option<String>,
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Write an SVG figure of a scenario.
    Figure {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// barycentric or klein; defaults to klein for hyperbolic planes.
        #[arg(long)]
        chart: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
}

fn read(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn load(path: &Path) -> Result<Scenario> {
    parse_scenario(&read(path)?)
}

/// Coordinates scaled so the largest entry is `+1`.
fn canonical(v: &Vector3<f64>) -> Value {
    let i = v.iamax();
    let v = v / v[i];
    json!(v.iter().map(|x| format!("{}", if *x == 0.0 { 0.0 } else { *x })).collect::<Vec<_>>())
}

fn point_json(p: &HPoint) -> Value {
    canonical(&p.re())
}

fn frame_of(plane: &PlaneSpec) -> Result<ReferenceFrame> {
    plane.frame(&Tolerance::default())
}

fn classify(arg: &str) -> Result<Value> {
    let text = if Path::new(arg).is_file() { read(Path::new(arg))? } else { arg.to_owned() };
    let wrapped = serde_json::from_str::<Value>(&text).ok().is_some_and(|v| v.get("plane").is_some());
    let plane = if wrapped { parse_scenario(&text)?.plane } else { parse_plane(&text)? };
    let frame = frame_of(&plane)?;
    let s = frame.structure();
    let mut out = json!({
        "kind": frame.kind().name(),
        "singular": s.is_singular(),
        "lemoine": point_json(frame.lemoine()),
        "circumcenter": point_json(frame.circumcenter()),
    });
    if let Some(q) = s.q() {
        out["q"] = json!(q.map(|x| format!("{x}")));
    }
    out["k"] = json!(frame.k().map(|x| format!("{x}")));
    Ok(out)
}

fn miquel(scenario: &Scenario) -> Result<Value> {
    let frame = frame_of(&scenario.plane)?;
    match &scenario.scene {
        Some(SceneSpec::Quadrilateral { lmn }) => {
            let lmn = values(lmn);
            let res = if frame.structure().is_singular() {
                miquel_point_affine(lmn, &frame)?
            } else {
                miquel_point_regular(&QuadrilateralScene::new(frame.clone(), lmn)?)?
            };
            let verts: Vec<Value> = ckm_core::quadrilateral_vertices(lmn).iter().map(canonical).collect();
            Ok(json!({
                "kind": frame.kind().name(),
                "mq": point_json(&res.point),
                "contact": format!("{:?}", res.contact),
                "congruence_ok": res.congruence_ok,
                "vertices": verts,
            }))
        }
        Some(scene @ SceneSpec::Lines { .. }) => {
            let lines = scene.lines().ok_or_else(|| HarnessError::schema("scene.lines", "zero line"))?;
            let mq = miquel_point_of_lines(&frame, [&lines[0], &lines[1], &lines[2], &lines[3]])?;
            Ok(json!({"kind": frame.kind().name(), "mq": point_json(&mq)}))
        }
        _ => Err(HarnessError::schema("scene", "miquel needs a quadrilateral or lines scene")),
    }
}

fn tetragon(scenario: &Scenario) -> Result<Value> {
    let frame = frame_of(&scenario.plane)?;
    let Some(SceneSpec::Tetragon { d }) = &scenario.scene else {
        return Err(HarnessError::schema("scene", "tetragon needs a tetragon scene"));
    };
    let scene = TetragonScene::new(frame.clone(), values(d))?;
    let n = scene.normalizers();
    let [a, b, c] = tetragon_miquel_triple(&scene)?;
    let mut out = json!({
        "kind": frame.kind().name(),
        "normalizers": {
            "alpha": format!("{}", n.alpha),
            "beta": format!("{}", n.beta),
            "gamma": format!("{}", n.gamma),
            "delta": format!("{}", n.delta),
        },
        "mq_a": point_json(&a),
        "mq_b": point_json(&b),
        "mq_c": point_json(&c),
        "perspector": point_json(&perspector(&scene)?),
    });
    out["concyclicity"] = match theorem3_check(&scene) {
        Ok(r) => json!({
            "concyclic": r.concyclic,
            "on_diagonal": r.on_diagonal,
            "delta_sum": format!("{}", r.delta_sum),
            "diagonal_residual": format_residual(r.diagonal_residual),
        }),
        Err(e) => json!({"error": e.to_string()}),
    };
    Ok(out)
}

fn verify_scenario(scenario: &Scenario, out: &mut dyn Write) -> Result<bool> {
    let outcomes = run_checks(scenario)?;
    for o in &outcomes {
        let rec = json!({
            "record": "check",
            "check": o.check,
            "passed": o.passed,
            "residual": format_residual(o.residual),
            "message": o.message,
        });
        writeln!(out, "{rec}")?;
    }
    let failures = outcomes.iter().filter(|o| !o.passed).count();
    writeln!(out, "{}", json!({"record": "summary", "checks": outcomes.len(), "failures": failures}))?;
    Ok(failures == 0)
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Classify { plane } => writeln!(out, "{}", classify(&plane)?)?,
        Command::Miquel { scenario } => writeln!(out, "{}", miquel(&load(&scenario)?)?)?,
        Command::Tetragon { scenario } => writeln!(out, "{}", tetragon(&load(&scenario)?)?)?,
        Command::Verify {
            suite,
            scenario,
            trials,
            seed,
            jobs,
        } => {
            let passed = if let Some(path) = scenario {
                verify_scenario(&load(&path)?, out)?
            } else {
                let name = suite.expect("clap requires --suite without --scenario");
                let report = run_suite(&name, trials, seed, jobs)?;
                out.write_all(report.to_jsonl().as_bytes())?;
                writeln!(err, "{name}: {trials} trials in {:.3} s", report.wall_time.as_secs_f64())?;
                report.passed()
            };
            return Ok(if passed { EXIT_OK } else { EXIT_FAILED });
        }
        Command::Figure {
            scenario,
            out: path,
            chart,
            samples,
        } => {
            let chart = match chart.as_deref() {
                None => None,
                Some(name) => Some(
                    ChartKind::parse(name)
                        .ok_or_else(|| HarnessError::schema("chart", format!("unknown chart `{name}`")))?,
                ),
            };
            if samples < 8 {
                return Err(HarnessError::schema("samples", "at least 8 samples are needed"));
            }
            let fig = emit_svg(&load(&scenario)?, &FigureOptions { chart, samples })?;
            for e in &fig.skipped {
                writeln!(err, "warning: {e}; skipped")?;
            }
            std::fs::write(&path, fig.svg)?;
        }
    }
    Ok(EXIT_OK)
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let cli = Cli::try_parse_from(std::iter::once("ckm").chain(args.iter().copied())).unwrap();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(cli, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn classify_inline_plane() {
        let (code, out, _) = run_args(&["classify", "--plane", r#"{"kind": "hyperbolic", "q": ["2", "0", "0"]}"#]);
        assert_eq!(code, EXIT_OK);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["kind"], "hyperbolic");
    }

    #[test]
    fn classify_reports_input_errors() {
        let (code, _, err) = run_args(&["classify", "--plane", r#"{"kind": "lorentz", "q": ["0", "0", "0"]}"#]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("plane.kind"), "{err}");
        let (code, _, err) = run_args(&["classify", "--plane", "{\n  \"kind\": "]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn unknown_suite_is_an_input_error() {
        let (code, _, err) = run_args(&["verify", "--suite", "nope", "--trials", "1"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("unknown suite"));
    }

    #[test]
    fn verify_prints_a_summary() {
        let (code, out, _) = run_args(&["verify", "--suite", "thm1", "--trials", "5", "--seed", "1", "--jobs", "1"]);
        assert_eq!(code, EXIT_OK);
        let last: Value = serde_json::from_str(out.lines().last().unwrap()).unwrap();
        assert_eq!(last["record"], "summary");
        assert_eq!(last["failures"], 0);
    }
}
