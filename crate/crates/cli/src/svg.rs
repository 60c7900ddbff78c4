//! SVG figures of scenarios.
//!
//! Both charts are projective maps `v -> H v` followed by dehomogenization,
//! so lines map through `H^-T` and conics stay conics. Conics are sampled
//! through the pencil of lines at one of their real points.

use std::fmt::Write as _;

use ckm_core::{
    circumconic_through, meet, miquel_point_affine, miquel_point_of_lines, miquel_point_regular, perspector,
    tetragon_miquel_triple, Conic, HLine, HPoint, PlaneKind, QuadrilateralScene, ReferenceFrame, TetragonScene,
    COMPONENT_TRIANGLES, VERTEX_NAMES,
};
use nalgebra::{Matrix3, SymmetricEigen, Vector2, Vector3};

use crate::error::{HarnessError, Result};
use crate::scenario::{values, Scenario, SceneSpec};

pub const DEFAULT_SAMPLES: usize = 256;
const SIZE: f64 = 800.0;
const MARKER_RADIUS: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartKind {
    /// The affine chart `x + y + z = 1` with `A, B, C` at an equilateral triangle.
    Barycentric,
    /// Cayley-Klein disk: the absolute of a hyperbolic plane is the unit circle.
    Klein,
}

impl ChartKind {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "barycentric" => Some(Self::Barycentric),
            "klein" => Some(Self::Klein),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureOptions {
    /// `None` picks the Klein disk for hyperbolic planes and the barycentric
    /// chart otherwise.
    pub chart: Option<ChartKind>,
    pub samples: usize,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self {
            chart: None,
            samples: DEFAULT_SAMPLES,
        }
    }
}

/// A figure plus the elements that could not be drawn.
#[derive(Debug)]
pub struct Figure {
    pub svg: String,
    pub skipped: Vec<HarnessError>,
}

#[derive(Debug, Clone, Copy)]
pub struct Chart {
    h: Matrix3<f64>,
}

impl Chart {
    pub fn barycentric() -> Self {
        let s = 3f64.sqrt() / 2.0;
        Self {
            h: Matrix3::new(0.5, 0.0, 1.0, s, 0.0, 0.0, 1.0, 1.0, 1.0),
        }
    }

    /// Rows `sqrt|l_i| e_i` with the odd-signed eigenvector last.
    pub fn klein(phi: &Matrix3<f64>) -> Result<Self> {
        let eig = SymmetricEigen::new(*phi);
        let scale = eig.eigenvalues.amax();
        let not_hyperbolic = || HarnessError::schema("chart", "the Klein disk needs a hyperbolic plane");
        if eig.eigenvalues.iter().any(|l| l.abs() <= 1e-9 * scale) {
            return Err(not_hyperbolic());
        }
        let pos: Vec<usize> = (0..3).filter(|i| eig.eigenvalues[*i] > 0.0).collect();
        let odd = match pos.len() {
            1 => pos[0],
            2 => (0..3).find(|i| !pos.contains(i)).unwrap(),
            _ => return Err(not_hyperbolic()),
        };
        let mut rest: Vec<usize> = (0..3).filter(|i| *i != odd).collect();
        rest.sort_unstable();
        let row = |i: usize| {
            let mut e = eig.eigenvectors.column(i).into_owned() * eig.eigenvalues[i].abs().sqrt();
            // fix the eigenvector sign so the picture does not depend on the solver
            let pivot = e.iamax();
            if e[pivot] < 0.0 {
                e = -e;
            }
            e.transpose()
        };
        let mut h = Matrix3::zeros();
        h.set_row(0, &row(rest[0]));
        h.set_row(1, &row(rest[1]));
        h.set_row(2, &row(odd));
        Ok(Self { h })
    }

    /// Chart image of a real point, `None` at infinity.
    pub fn map(&self, v: &Vector3<f64>) -> Option<Vector2<f64>> {
        let w = self.h * v;
        if w[2].abs() <= 1e-12 * w.norm() {
            return None;
        }
        Some(Vector2::new(w[0] / w[2], w[1] / w[2]))
    }

    fn homogeneous(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.h * v
    }

    fn line(&self, l: &Vector3<f64>) -> Option<Vector3<f64>> {
        Some(self.h.try_inverse()?.transpose() * l)
    }
}

/// Square chart window with the y axis pointing up.
#[derive(Debug, Clone, Copy)]
struct Viewport {
    min: Vector2<f64>,
    span: f64,
}

impl Viewport {
    fn around(points: &[Vector2<f64>]) -> Self {
        let mut lo = Vector2::repeat(f64::INFINITY);
        let mut hi = Vector2::repeat(f64::NEG_INFINITY);
        for p in points {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        if points.is_empty() {
            lo = Vector2::new(-1.0, -1.0);
            hi = Vector2::new(1.0, 1.0);
        }
        let span = (hi - lo).max().max(1e-6) * 1.4;
        let center = (lo + hi) / 2.0;
        Self {
            min: center - Vector2::repeat(span / 2.0),
            span,
        }
    }

    fn px(&self, p: &Vector2<f64>) -> (f64, f64) {
        (
            (p[0] - self.min[0]) / self.span * SIZE,
            (self.min[1] + self.span - p[1]) / self.span * SIZE,
        )
    }

    /// Far enough outside to cut a polyline.
    fn far(&self, p: &Vector2<f64>) -> bool {
        let c = self.min + Vector2::repeat(self.span / 2.0);
        (p - c).amax() > 10.0 * self.span
    }

    /// Segment of the chart line `a x + b y + c = 0` inside the window.
    fn clip_line(&self, l: &Vector3<f64>) -> Option<(Vector2<f64>, Vector2<f64>)> {
        let (x0, y0) = (self.min[0], self.min[1]);
        let (x1, y1) = (x0 + self.span, y0 + self.span);
        let mut hits: Vec<Vector2<f64>> = Vec::new();
        if l[1].abs() > 1e-15 {
            for x in [x0, x1] {
                let y = -(l[0] * x + l[2]) / l[1];
                if (y0..=y1).contains(&y) {
                    hits.push(Vector2::new(x, y));
                }
            }
        }
        if l[0].abs() > 1e-15 {
            for y in [y0, y1] {
                let x = -(l[1] * y + l[2]) / l[0];
                if (x0..=x1).contains(&x) {
                    hits.push(Vector2::new(x, y));
                }
            }
        }
        let a = *hits.first()?;
        let b = hits.iter().max_by(|p, q| (*p - a).norm().total_cmp(&(*q - a).norm()))?;
        ((b - a).norm() > 0.0).then_some((a, *b))
    }
}

/// A real point of a real conic, `None` when it has none.
pub fn real_point_on(m: &Matrix3<f64>) -> Option<Vector3<f64>> {
    let m = m / m.amax();
    let eig = SymmetricEigen::new(m);
    let scale = eig.eigenvalues.amax();
    let (mut pos, mut neg) = (None, None);
    for i in 0..3 {
        let l = eig.eigenvalues[i];
        if l > 1e-12 * scale {
            pos = Some(i);
        } else if l < -1e-12 * scale {
            neg = Some(i);
        } else {
            // kernel direction of a degenerate conic
            return Some(eig.eigenvectors.column(i).into_owned());
        }
    }
    let (a, b) = (pos?, neg?);
    let ea = eig.eigenvectors.column(a) / eig.eigenvalues[a].abs().sqrt();
    let eb = eig.eigenvectors.column(b) / eig.eigenvalues[b].abs().sqrt();
    Some(ea + eb)
}

/// `X(t) = m(W) P0 - 2 b(P0, W) W` for `W = cos t U + sin t V`, where `U, V`
/// span the plane orthogonal to `P0`; `t` runs over `[0, pi]`.
pub fn sample_conic(m: &Matrix3<f64>, p0: &Vector3<f64>, samples: usize) -> Vec<Vector3<f64>> {
    let p0 = p0.normalize();
    let seed = if p0[0].abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let u = p0.cross(&seed).normalize();
    let v = p0.cross(&u);
    (0..=samples)
        .map(|i| {
            let t = std::f64::consts::PI * i as f64 / samples as f64;
            let w = u * t.cos() + v * t.sin();
            let mw = (w.transpose() * m * w)[0];
            let b = (p0.transpose() * m * w)[0];
            p0 * mw - w * (2.0 * b)
        })
        .collect()
}

fn fmt(x: f64) -> String {
    format!("{x:.3}")
}

/// SVG path data of a sampled curve, split where it leaves the window or
/// crosses the line at infinity of the chart.
fn curve_path(chart: &Chart, view: &Viewport, pts: &[Vector3<f64>]) -> String {
    let mut d = String::new();
    let mut pen_down = false;
    let mut last_w: Option<f64> = None;
    for v in pts {
        if v.norm() < 1e-14 {
            pen_down = false;
            continue;
        }
        // samples depend continuously on t, so a sign change of the third
        // chart coordinate is a crossing of the chart's line at infinity
        let h = chart.homogeneous(v);
        let crossed = last_w.is_some_and(|w| w * h[2] < 0.0);
        last_w = Some(h[2]);
        let p = chart.map(v);
        match p {
            Some(p) if !view.far(&p) && !crossed => {
                let (x, y) = view.px(&p);
                let _ = write!(d, "{}{} {} ", if pen_down { "L" } else { "M" }, fmt(x), fmt(y));
                pen_down = true;
            }
            Some(p) if !view.far(&p) => {
                let (x, y) = view.px(&p);
                let _ = write!(d, "M{} {} ", fmt(x), fmt(y));
                pen_down = true;
            }
            _ => pen_down = false,
        }
    }
    d.trim_end().to_owned()
}

enum Element {
    Conic { id: String, class: &'static str, style: &'static str, m: Matrix3<f64> },
    Line { id: String, class: &'static str, l: Vector3<f64> },
    Point { id: String, class: &'static str, label: String, v: Vector3<f64> },
}

const CIRCLE_STYLE: &str = "fill:none;stroke:#1f4e9c;stroke-width:1.5";
const ABSOLUTE_STYLE: &str = "fill:#dceefc;fill-opacity:0.4;stroke:#6cb4ee;stroke-width:2.5";
const LINE_STYLE: &str = "stroke:#888888;stroke-width:1";
const RADICAL_STYLE: &str = "stroke:#c0392b;stroke-width:1;stroke-dasharray:6 4";

fn real_matrix(c: &Conic) -> Matrix3<f64> {
    c.real_matrix()
}

fn point(id: &str, class: &'static str, v: Vector3<f64>) -> Element {
    Element::Point {
        id: id.to_owned(),
        class,
        label: id.to_owned(),
        v,
    }
}

fn quadrilateral_elements(frame: &ReferenceFrame, lmn: [f64; 3]) -> Result<Vec<Element>> {
    let scene = QuadrilateralScene::new(frame.clone(), lmn)?;
    let mq = if frame.structure().is_singular() {
        miquel_point_affine(lmn, frame)?.point
    } else {
        miquel_point_regular(&scene)?.point
    };
    let mut out = Vec::new();
    for (circle, tri) in scene.circles()?.iter().zip(COMPONENT_TRIANGLES) {
        let name: String = tri.iter().map(|i| VERTEX_NAMES[*i]).collect();
        out.push(Element::Conic {
            id: format!("circle-{name}"),
            class: "conic",
            style: CIRCLE_STYLE,
            m: real_matrix(circle),
        });
    }
    for (l, name) in scene.lines().iter().zip(["a", "b", "c", "g"]) {
        out.push(Element::Line {
            id: format!("side-{name}"),
            class: "side",
            l: l.re(),
        });
    }
    let verts = ckm_core::quadrilateral_vertices(lmn);
    if frame.structure().is_singular() {
        for (v, name) in verts.iter().zip(VERTEX_NAMES) {
            let l = v.cross(&mq.re());
            if l.norm() > 1e-12 {
                out.push(Element::Line {
                    id: format!("radical-{name}"),
                    class: "radical-line",
                    l,
                });
            }
        }
    } else {
        for (l, name) in scene.radical_lines()?.iter().zip(VERTEX_NAMES) {
            out.push(Element::Line {
                id: format!("radical-{name}"),
                class: "radical-line",
                l: l.re(),
            });
        }
    }
    for (v, name) in verts.iter().zip(VERTEX_NAMES) {
        out.push(point(name, "vertex", *v));
    }
    out.push(point("Mq", "miquel", mq.re()));
    Ok(out)
}

fn tetragon_elements(frame: &ReferenceFrame, d: [f64; 3]) -> Result<Vec<Element>> {
    let scene = TetragonScene::new(frame.clone(), d)?;
    let triple = tetragon_miquel_triple(&scene)?;
    let q = perspector(&scene)?;
    let mut out = vec![Element::Conic {
        id: "circle-ABC".into(),
        class: "conic",
        style: CIRCLE_STYLE,
        m: real_matrix(frame.circum()),
    }];
    let abc = [Vector3::x(), Vector3::y(), Vector3::z()];
    for ((v, m), name) in abc.iter().zip(&triple).zip(["A", "B", "C"]) {
        out.push(Element::Line {
            id: format!("perspective-{name}"),
            class: "radical-line",
            l: v.cross(&m.re()),
        });
    }
    for (v, name) in abc.iter().zip(["A", "B", "C"]) {
        out.push(point(name, "vertex", *v));
    }
    out.push(point("D", "vertex", Vector3::from(d)));
    for (m, name) in triple.iter().zip(["Mq_A", "Mq_B", "Mq_C"]) {
        out.push(point(name, "miquel", m.re()));
    }
    out.push(point("Q", "perspector", q.re()));
    Ok(out)
}

fn lines_elements(frame: &ReferenceFrame, lines: &[HLine; 4]) -> Result<Vec<Element>> {
    let tol = frame.tol();
    let mq = miquel_point_of_lines(frame, [&lines[0], &lines[1], &lines[2], &lines[3]])?;
    let mut out = Vec::new();
    let mut verts = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            verts.push(((i, j), meet(&lines[i], &lines[j], tol)?));
        }
    }
    let vertex = |i: usize, j: usize| verts.iter().find(|(k, _)| *k == (i.min(j), i.max(j))).unwrap().1;
    for skip in (0..4).rev() {
        let [a, b, c]: [usize; 3] = (0..4).filter(|i| *i != skip).collect::<Vec<_>>().try_into().unwrap();
        let conic = circumconic_through(&vertex(a, b), &vertex(b, c), &vertex(a, c), frame)?;
        out.push(Element::Conic {
            id: format!("circle-{a}{b}{c}"),
            class: "conic",
            style: CIRCLE_STYLE,
            m: real_matrix(&conic),
        });
    }
    for (i, l) in lines.iter().enumerate() {
        out.push(Element::Line {
            id: format!("side-{i}"),
            class: "side",
            l: l.re(),
        });
    }
    for ((i, j), v) in &verts {
        out.push(point(&format!("V{i}{j}"), "vertex", v.re()));
    }
    out.push(point("Mq", "miquel", mq.re()));
    Ok(out)
}

fn points_elements(frame: &ReferenceFrame, pts: &[HPoint]) -> Result<Vec<Element>> {
    let mut out = Vec::new();
    if pts.len() >= 3 {
        out.push(Element::Conic {
            id: "circle".into(),
            class: "conic",
            style: CIRCLE_STYLE,
            m: real_matrix(&circumconic_through(&pts[0], &pts[1], &pts[2], frame)?),
        });
    }
    for (i, p) in pts.iter().enumerate() {
        out.push(point(&format!("P{}", i + 1), "vertex", p.re()));
    }
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Draws the scene of a scenario.
pub fn emit_svg(scenario: &Scenario, options: &FigureOptions) -> Result<Figure> {
    let frame = scenario.plane.frame(&Default::default())?;
    let kind = frame.kind();
    let scene = scenario
        .scene
        .as_ref()
        .ok_or_else(|| HarnessError::schema("scene", "a figure needs a scene"))?;
    let mut elements = match scene {
        SceneSpec::Quadrilateral { lmn } => quadrilateral_elements(&frame, values(lmn))?,
        SceneSpec::Tetragon { d } => tetragon_elements(&frame, values(d))?,
        SceneSpec::Lines { .. } => {
            let lines = scene.lines().ok_or_else(|| HarnessError::schema("scene.lines", "zero line"))?;
            lines_elements(&frame, &lines)?
        }
        SceneSpec::Points { .. } => {
            let pts = scene.points().ok_or_else(|| HarnessError::schema("scene.points", "zero point"))?;
            points_elements(&frame, &pts)?
        }
    };
    if kind == PlaneKind::Hyperbolic {
        elements.insert(
            0,
            Element::Conic {
                id: "absolute".into(),
                class: "conic",
                style: ABSOLUTE_STYLE,
                m: *frame.structure().phi_matrix(),
            },
        );
    }

    let chart_kind = options.chart.unwrap_or(if kind == PlaneKind::Hyperbolic {
        ChartKind::Klein
    } else {
        ChartKind::Barycentric
    });
    let chart = match chart_kind {
        ChartKind::Barycentric => Chart::barycentric(),
        ChartKind::Klein if kind == PlaneKind::Hyperbolic => Chart::klein(frame.structure().phi_matrix())?,
        ChartKind::Klein => return Err(HarnessError::schema("chart", "the Klein disk needs a hyperbolic plane")),
    };

    let mut anchors: Vec<Vector2<f64>> = elements
        .iter()
        .filter_map(|e| match e {
            Element::Point { v, .. } => chart.map(v),
            _ => None,
        })
        .collect();
    if chart_kind == ChartKind::Klein {
        anchors.extend([Vector2::new(-1.0, -1.0), Vector2::new(1.0, 1.0)]);
    }
    let view = Viewport::around(&anchors);

    let mut skipped = Vec::new();
    let mut body = String::new();
    for e in &elements {
        match e {
            Element::Conic { id, class, style, m } => {
                let d = real_point_on(m).map(|p0| curve_path(&chart, &view, &sample_conic(m, &p0, options.samples)));
                match d {
                    Some(d) if !d.is_empty() => {
                        let _ = writeln!(body, r#"  <path class="{class}" id="{id}" style="{style}" d="{d}"/>"#);
                    }
                    _ => skipped.push(HarnessError::UnboundedElement(id.clone())),
                }
            }
            Element::Line { id, class, l } => {
                let seg = chart.line(l).and_then(|cl| view.clip_line(&cl));
                match seg {
                    Some((a, b)) => {
                        let (ax, ay) = view.px(&a);
                        let (bx, by) = view.px(&b);
                        let style = if *class == "side" { LINE_STYLE } else { RADICAL_STYLE };
                        let _ = writeln!(
                            body,
                            r#"  <path class="{class}" id="{id}" style="{style}" d="M{} {} L{} {}"/>"#,
                            fmt(ax),
                            fmt(ay),
                            fmt(bx),
                            fmt(by)
                        );
                    }
                    None => skipped.push(HarnessError::UnboundedElement(id.clone())),
                }
            }
            Element::Point { id, class, label, v } => match chart.map(v) {
                Some(p) => {
                    let (x, y) = view.px(&p);
                    let fill = if *class == "vertex" { "#000000" } else { "#c0392b" };
                    let _ = writeln!(
                        body,
                        r#"  <g class="{class}" id="{}"><circle cx="{}" cy="{}" r="{MARKER_RADIUS}" style="fill:{fill}"/><text x="{}" y="{}" style="font-family:sans-serif;font-size:14px">{}</text></g>"#,
                        escape(id),
                        fmt(x),
                        fmt(y),
                        fmt(x + 6.0),
                        fmt(y - 6.0),
                        escape(label)
                    );
                }
                None => skipped.push(HarnessError::UnboundedElement(id.clone())),
            },
        }
    }

    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(svg, "  <title>{} plane, {} scene</title>", kind, scene.type_name());
    let _ = writeln!(svg, r#"  <rect x="0" y="0" width="{SIZE}" height="{SIZE}" style="fill:#ffffff"/>"#);
    svg.push_str(&body);
    svg.push_str("</svg>\n");
    Ok(Figure { svg, skipped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{triple, PlaneSpec};

    fn quad_scenario(plane: PlaneSpec, lmn: [f64; 3]) -> Scenario {
        Scenario {
            plane,
            scene: Some(SceneSpec::Quadrilateral { lmn: triple(lmn) }),
            seed: None,
            checks: vec![],
        }
    }

    fn attr(tag: &str, name: &str) -> f64 {
        let key = format!(" {name}=\"");
        let start = tag.find(&key).unwrap() + key.len();
        tag[start..].split('"').next().unwrap().parse().unwrap()
    }

    #[test]
    fn sampled_points_lie_on_the_conic() {
        let m = Matrix3::new(1.0, 0.2, 0.0, 0.2, -2.0, 0.5, 0.0, 0.5, 0.7);
        let p0 = real_point_on(&m).unwrap();
        assert!((p0.transpose() * m * p0)[0].abs() < 1e-12);
        for x in sample_conic(&m, &p0, 64) {
            assert!((x.transpose() * m * x)[0].abs() <= 1e-12 * x.norm_squared());
        }
        assert!(real_point_on(&Matrix3::identity()).is_none());
    }

    #[test]
    fn miquel_marker_sits_at_its_chart_image() {
        let s = quad_scenario(PlaneSpec::regular(PlaneKind::Elliptic, [0.0; 3]), [1.0, 1.0, 1.0]);
        let fig = emit_svg(&s, &FigureOptions::default()).unwrap();
        let tag = fig.svg.lines().find(|l| l.contains(r#"id="Mq""#)).unwrap();
        let chart = Chart::barycentric();
        let image = chart.map(&Vector3::new(-1.0, 1.0, -1.0)).unwrap();
        assert!((image - Vector2::new(1.5, 3f64.sqrt() / 2.0)).norm() < 1e-12);
        let a = chart.map(&Vector3::x()).unwrap();
        let ax = attr(fig.svg.lines().find(|l| l.contains(r#"id="A""#)).unwrap(), "cx");
        let mx = attr(tag, "cx");
        // equal chart spans map to equal pixel spans
        let b = chart.map(&Vector3::y()).unwrap();
        let bx = attr(fig.svg.lines().find(|l| l.contains(r#"id="B""#)).unwrap(), "cx");
        let px_per_unit = (ax - bx) / (a[0] - b[0]);
        assert!((mx - ax - (image[0] - a[0]) * px_per_unit).abs() < 1e-2);
    }

    #[test]
    fn hyperbolic_scene_has_five_conics() {
        let s = quad_scenario(PlaneSpec::regular(PlaneKind::Hyperbolic, [-2.0, -1.5, -3.0]), [1.0, 2.0, 3.0]);
        let fig = emit_svg(&s, &FigureOptions::default()).unwrap();
        assert_eq!(fig.svg.matches(r#"class="conic""#).count(), 5, "{}", fig.svg);
        assert!(fig.svg.contains(r#"id="absolute""#));
        assert!(fig.svg.contains(r#"<g class="miquel" id="Mq">"#));
        assert!(!fig.svg.contains("xlink:href"));
    }

    #[test]
    fn elliptic_absolute_is_not_drawn() {
        let s = quad_scenario(PlaneSpec::regular(PlaneKind::Elliptic, [0.1, 0.2, 0.3]), [1.0, 2.0, 3.0]);
        let fig = emit_svg(&s, &FigureOptions::default()).unwrap();
        assert_eq!(fig.svg.matches(r#"class="conic""#).count(), 4);
    }

    #[test]
    fn klein_chart_maps_the_absolute_to_the_unit_circle() {
        let tol = ckm_core::Tolerance::default();
        let frame = ReferenceFrame::regular([2.0, 0.5, -0.3], &tol).unwrap();
        let phi = *frame.structure().phi_matrix();
        let chart = Chart::klein(&phi).unwrap();
        let p0 = real_point_on(&phi).unwrap();
        for x in sample_conic(&phi, &p0, 32) {
            if let Some(p) = chart.map(&x) {
                assert!((p.norm() - 1.0).abs() < 1e-9);
            }
        }
        assert!(Chart::klein(&Matrix3::identity()).is_err());
        assert!(Chart::klein(&Matrix3::repeat(1.0)).is_err());
    }

    #[test]
    fn point_at_infinity_is_skipped() {
        let tol = ckm_core::Tolerance::default();
        let frame = ReferenceFrame::from_lemoine([1.0, 1.0, 1.0], &tol).unwrap();
        let s = Scenario {
            plane: PlaneSpec::lemoine(PlaneKind::Euclidean, [1.0, 1.0, 1.0]),
            scene: Some(SceneSpec::Points {
                points: vec![triple([1.0, 0.0, 0.0]), triple([1.0, -1.0, 0.0])],
            }),
            seed: None,
            checks: vec![],
        };
        assert_eq!(frame.kind(), PlaneKind::Euclidean);
        let fig = emit_svg(&s, &FigureOptions::default()).unwrap();
        assert!(matches!(&fig.skipped[..], [HarnessError::UnboundedElement(id)] if id == "P2"));
    }
}
