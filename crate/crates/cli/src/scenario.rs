//! Scenario documents: a plane, an optional scene, a seed and a list of
//! checks.
//!
//! Every real number is a JSON string holding a decimal literal, so a parsed
//! document re-emits byte for byte. The canonical layout is two-space
//! indented JSON with keys in the order `plane`, `scene`, `seed`, `checks`
//! and a trailing newline.

use ckm_core::{HLine, HPoint, PlaneKind, ReferenceFrame, Tolerance};
use serde::ser::{Serialize, SerializeMap, Serializer};
use serde_json::{Map, Value};

use crate::error::{HarnessError, Result};
use crate::suites::SUITE_NAMES;

/// A real number together with the literal it was read from.
#[derive(Debug, Clone, PartialEq)]
pub struct Decimal {
    text: String,
    value: f64,
}

fn is_decimal_literal(s: &str) -> bool {
    let b = s.as_bytes();
    let mut i = 0;
    let digits = |i: &mut usize| {
        let start = *i;
        while *i < b.len() && b[*i].is_ascii_digit() {
            *i += 1;
        }
        *i > start
    };
    if b.first() == Some(&b'-') {
        i += 1;
    }
    if !digits(&mut i) {
        return false;
    }
    if i < b.len() && b[i] == b'.' {
        i += 1;
        if !digits(&mut i) {
            return false;
        }
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        i += 1;
        if i < b.len() && (b[i] == b'+' || b[i] == b'-') {
            i += 1;
        }
        if !digits(&mut i) {
            return false;
        }
    }
    i == b.len()
}

impl Decimal {
    pub fn parse(text: &str) -> Option<Self> {
        if !is_decimal_literal(text) {
            return None;
        }
        let value: f64 = text.parse().ok()?;
        value.is_finite().then(|| Self {
            text: text.to_owned(),
            value,
        })
    }

    /// Shortest literal that reads back as `x`.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "decimal from non-finite value");
        let text = format!("{x}");
        let value = text.parse().expect("Display output of f64 parses");
        Self { text, value }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.text)
    }
}

pub type Triple = [Decimal; 3];

pub fn triple(v: [f64; 3]) -> Triple {
    v.map(Decimal::from_f64)
}

pub fn values(t: &Triple) -> [f64; 3] {
    [t[0].value, t[1].value, t[2].value]
}

const KINDS: [PlaneKind; 5] = [
    PlaneKind::Elliptic,
    PlaneKind::Hyperbolic,
    PlaneKind::Euclidean,
    PlaneKind::Minkowski,
    PlaneKind::Galilean,
];

pub fn parse_kind(name: &str) -> Option<PlaneKind> {
    KINDS.into_iter().find(|k| k.name() == name)
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlaneSpec {
    /// `phi = x^2 + y^2 + z^2 + 2 q_A yz + 2 q_B zx + 2 q_C xy`.
    Regular { kind: PlaneKind, q: Triple },
    /// Metric-affine plane given by its circumcenter `O`.
    Circumcenter { kind: PlaneKind, o: Triple },
    /// Metric-affine plane given by its Lemoine point `K = (k1 : k2 : k3)`.
    Lemoine { kind: PlaneKind, k: Triple },
}

impl PlaneSpec {
    pub fn regular(kind: PlaneKind, q: [f64; 3]) -> Self {
        Self::Regular { kind, q: triple(q) }
    }

    pub fn lemoine(kind: PlaneKind, k: [f64; 3]) -> Self {
        Self::Lemoine { kind, k: triple(k) }
    }

    pub fn kind(&self) -> PlaneKind {
        match self {
            Self::Regular { kind, .. } | Self::Circumcenter { kind, .. } | Self::Lemoine { kind, .. } => *kind,
        }
    }

    /// Builds the frame and checks that the declared kind matches.
    pub fn frame(&self, tol: &Tolerance) -> Result<ReferenceFrame> {
        let (frame, field) = match self {
            Self::Regular { q, .. } => (ReferenceFrame::regular(values(q), tol), "plane.q"),
            Self::Circumcenter { o, .. } => {
                let [x, y, z] = values(o);
                let o = HPoint::real(x, y, z).map_err(|e| HarnessError::schema("plane.O", e.to_string()))?;
                (ReferenceFrame::singular(&o, tol), "plane.O")
            }
            Self::Lemoine { k, .. } => (ReferenceFrame::from_lemoine(values(k), tol), "plane.k"),
        };
        let frame = frame.map_err(|e| HarnessError::schema(field, e.to_string()))?;
        if frame.kind() != self.kind() {
            return Err(HarnessError::schema(
                "plane.kind",
                format!("declared {} but the data describes a {} plane", self.kind(), frame.kind()),
            ));
        }
        Ok(frame)
    }
}

impl Serialize for PlaneSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("kind", self.kind().name())?;
        match self {
            Self::Regular { q, .. } => m.serialize_entry("q", q)?,
            Self::Circumcenter { o, .. } => m.serialize_entry("O", o)?,
            Self::Lemoine { k, .. } => m.serialize_entry("k", k)?,
        }
        m.end()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SceneSpec {
    /// Reference triangle plus the line `l x + m y + n z = 0`.
    Quadrilateral { lmn: Triple },
    /// Reference triangle plus `D = [d_A : d_B : d_C]`.
    Tetragon { d: Triple },
    /// Four explicit lines `a, b, c, g`.
    Lines { lines: Box<[Triple; 4]> },
    /// Free list of points, used by the point-level checks.
    Points { points: Vec<Triple> },
}

impl SceneSpec {
    pub fn type_name(&self) -> &'static str {
        match self {
            Self::Quadrilateral { .. } => "quadrilateral",
            Self::Tetragon { .. } => "tetragon",
            Self::Lines { .. } => "lines",
            Self::Points { .. } => "points",
        }
    }

    pub fn lines(&self) -> Option<[HLine; 4]> {
        let Self::Lines { lines } = self else { return None };
        let mut out = Vec::with_capacity(4);
        for l in lines.iter() {
            let [a, b, c] = values(l);
            out.push(HLine::real(a, b, c).ok()?);
        }
        Some([out[0], out[1], out[2], out[3]])
    }

    pub fn points(&self) -> Option<Vec<HPoint>> {
        let Self::Points { points } = self else { return None };
        points
            .iter()
            .map(|p| {
                let [x, y, z] = values(p);
                HPoint::real(x, y, z).ok()
            })
            .collect()
    }
}

impl Serialize for SceneSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("type", self.type_name())?;
        match self {
            Self::Quadrilateral { lmn } => m.serialize_entry("lmn", lmn)?,
            Self::Tetragon { d } => m.serialize_entry("d", d)?,
            Self::Lines { lines } => m.serialize_entry("lines", lines.as_ref())?,
            Self::Points { points } => m.serialize_entry("points", points)?,
        }
        m.end()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub plane: PlaneSpec,
    pub scene: Option<SceneSpec>,
    pub seed: Option<u64>,
    pub checks: Vec<String>,
}

impl Serialize for Scenario {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("plane", &self.plane)?;
        if let Some(scene) = &self.scene {
            m.serialize_entry("scene", scene)?;
        }
        if let Some(seed) = self.seed {
            m.serialize_entry("seed", &seed)?;
        }
        m.serialize_entry("checks", &self.checks)?;
        m.end()
    }
}

/// Canonical text of a scenario.
pub fn emit_scenario(s: &Scenario) -> String {
    let mut out = serde_json::to_string_pretty(s).expect("scenario serialization is infallible");
    out.push('\n');
    out
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let value: Value = serde_json::from_str(text).map_err(|e| HarnessError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    scenario_from_value(&value)
}

/// Parses a standalone plane object, e.g. `{"kind": "elliptic", "q": ["0", "0", "0"]}`.
pub fn parse_plane(text: &str) -> Result<PlaneSpec> {
    let value: Value = serde_json::from_str(text).map_err(|e| HarnessError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    plane_from_value(&value, "plane")
}

fn object<'a>(v: &'a Value, field: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| HarnessError::schema(field, "expected an object"))
}

fn reject_unknown(m: &Map<String, Value>, field: &str, allowed: &[&str]) -> Result<()> {
    match m.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(HarnessError::schema(join_field(field, k), "unknown field")),
        None => Ok(()),
    }
}

fn join_field(parent: &str, key: &str) -> String {
    if parent.is_empty() {
        key.to_owned()
    } else {
        format!("{parent}.{key}")
    }
}

fn decimal(v: &Value, field: &str) -> Result<Decimal> {
    let s = v
        .as_str()
        .ok_or_else(|| HarnessError::schema(field, "expected a decimal string"))?;
    Decimal::parse(s).ok_or_else(|| HarnessError::schema(field, format!("`{s}` is not a finite decimal literal")))
}

fn triple_from(v: &Value, field: &str, nonzero: bool) -> Result<Triple> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 3)
        .ok_or_else(|| HarnessError::schema(field, "expected an array of three decimal strings"))?;
    let d: Vec<Decimal> = arr
        .iter()
        .enumerate()
        .map(|(i, x)| decimal(x, &format!("{field}[{i}]")))
        .collect::<Result<_>>()?;
    let t = [d[0].clone(), d[1].clone(), d[2].clone()];
    if nonzero && values(&t).iter().all(|x| *x == 0.0) {
        return Err(HarnessError::schema(field, "zero vector"));
    }
    Ok(t)
}

fn plane_from_value(v: &Value, field: &str) -> Result<PlaneSpec> {
    let m = object(v, field)?;
    reject_unknown(m, field, &["kind", "q", "O", "k"])?;
    let kind_field = join_field(field, "kind");
    let name = m
        .get("kind")
        .ok_or_else(|| HarnessError::schema(&kind_field, "missing"))?
        .as_str()
        .ok_or_else(|| HarnessError::schema(&kind_field, "expected a string"))?;
    let kind = parse_kind(name).ok_or_else(|| HarnessError::schema(&kind_field, format!("unknown plane kind `{name}`")))?;
    let present: Vec<&str> = ["q", "O", "k"].into_iter().filter(|k| m.contains_key(*k)).collect();
    let want: &[&str] = if kind.is_metric_affine() { &["O", "k"] } else { &["q"] };
    let key = match present.as_slice() {
        [one] if want.contains(one) => *one,
        [one] => {
            return Err(HarnessError::schema(
                join_field(field, one),
                format!("not allowed for a {kind} plane"),
            ))
        }
        [] => return Err(HarnessError::schema(join_field(field, want[0]), "missing")),
        _ => return Err(HarnessError::schema(field, "give exactly one of q, O, k")),
    };
    let t = triple_from(&m[key], &join_field(field, key), key != "q")?;
    Ok(match key {
        "q" => PlaneSpec::Regular { kind, q: t },
        "O" => PlaneSpec::Circumcenter { kind, o: t },
        _ => PlaneSpec::Lemoine { kind, k: t },
    })
}

fn scene_from_value(v: &Value) -> Result<SceneSpec> {
    let m = object(v, "scene")?;
    let ty = m
        .get("type")
        .ok_or_else(|| HarnessError::schema("scene.type", "missing"))?
        .as_str()
        .ok_or_else(|| HarnessError::schema("scene.type", "expected a string"))?;
    let payload = match ty {
        "quadrilateral" => "lmn",
        "tetragon" => "d",
        "lines" => "lines",
        "points" => "points",
        other => return Err(HarnessError::schema("scene.type", format!("unknown scene type `{other}`"))),
    };
    reject_unknown(m, "scene", &["type", payload])?;
    let field = format!("scene.{payload}");
    let data = m.get(payload).ok_or_else(|| HarnessError::schema(&field, "missing"))?;
    let list = |min: usize, max: usize| -> Result<Vec<Triple>> {
        let arr = data
            .as_array()
            .filter(|a| (min..=max).contains(&a.len()))
            .ok_or_else(|| HarnessError::schema(&field, format!("expected between {min} and {max} triples")))?;
        arr.iter()
            .enumerate()
            .map(|(i, x)| triple_from(x, &format!("{field}[{i}]"), true))
            .collect()
    };
    Ok(match ty {
        "quadrilateral" => {
            let lmn = triple_from(data, &field, true)?;
            if values(&lmn).contains(&0.0) {
                return Err(HarnessError::schema(field, "l, m, n must be nonzero"));
            }
            SceneSpec::Quadrilateral { lmn }
        }
        "tetragon" => {
            let d = triple_from(data, &field, true)?;
            if d[0].value() <= 0.0 {
                return Err(HarnessError::schema(field, "d_A must be positive"));
            }
            SceneSpec::Tetragon { d }
        }
        "lines" => {
            let l = list(4, 4)?;
            SceneSpec::Lines {
                lines: Box::new([l[0].clone(), l[1].clone(), l[2].clone(), l[3].clone()]),
            }
        }
        _ => SceneSpec::Points { points: list(1, 64)? },
    })
}

fn scenario_from_value(v: &Value) -> Result<Scenario> {
    let m = object(v, "")?;
    reject_unknown(m, "", &["plane", "scene", "seed", "checks"])?;
    let plane = plane_from_value(m.get("plane").ok_or_else(|| HarnessError::schema("plane", "missing"))?, "plane")?;
    let scene = m.get("scene").map(scene_from_value).transpose()?;
    let seed = match m.get("seed") {
        None => None,
        Some(s) => Some(
            s.as_u64()
                .ok_or_else(|| HarnessError::schema("seed", "expected a non-negative integer"))?,
        ),
    };
    let mut checks = Vec::new();
    if let Some(c) = m.get("checks") {
        let arr = c
            .as_array()
            .ok_or_else(|| HarnessError::schema("checks", "expected an array of suite names"))?;
        for (i, x) in arr.iter().enumerate() {
            let field = format!("checks[{i}]");
            let name = x.as_str().ok_or_else(|| HarnessError::schema(&field, "expected a string"))?;
            if !SUITE_NAMES.contains(&name) {
                return Err(HarnessError::schema(field, format!("unknown check `{name}`")));
            }
            checks.push(name.to_owned());
        }
    }
    Ok(Scenario {
        plane,
        scene,
        seed,
        checks,
    })
}
