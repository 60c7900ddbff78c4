//! Miquel-Steiner points of complete quadrilaterals and tetragons.

use nalgebra::Vector3;

use crate::cayley_klein::{congruent, normalize_point, NormalizedPoint};
use crate::circles::{circumconic_through, radical_line_at_vertex, ReferenceFrame};
use crate::error::{GeometryError, Result};
use crate::projective::{conic_intersections, incidence, meet, Conic, HLine, HPoint};

mod tetragon;

pub use tetragon::{
    miquel_fixed_point, miquel_transformation, perspector, tetragon_miquel_triple,
    tetragon_normalizers, theorem3_check, TetragonNormalizers, TetragonScene, Theorem3Record,
};

/// How the four circles meet at the Miquel-Steiner point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Contact {
    Transversal,
    /// The circles touch at a real circular point on the line at infinity.
    TangentialAtInfinity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiquelResult {
    pub point: HPoint,
    pub contact: Contact,
    pub congruence_ok: bool,
}

/// Vertex labels of a quadrilateral scene, in storage order.
pub const VERTEX_NAMES: [&str; 6] = ["A", "B", "C", "D", "E", "F"];

/// Vertex triples of the four component triangles: `ABC`, `AEF`, `BDF`, `CDE`.
pub const COMPONENT_TRIANGLES: [[usize; 3]; 4] = [[0, 1, 2], [0, 4, 5], [1, 3, 5], [2, 3, 4]];

/// For each vertex, the other two vertices of each of the two component
/// circles through it.
const RADICAL_PAIRS: [(usize, [usize; 4]); 6] = [
    (0, [1, 2, 4, 5]),
    (1, [0, 2, 3, 5]),
    (2, [0, 1, 3, 4]),
    (3, [1, 5, 2, 4]),
    (4, [0, 5, 2, 3]),
    (5, [0, 4, 1, 3]),
];

/// The complete quadrilateral formed by the side lines of the reference
/// triangle and the line `lx + my + nz = 0`.
///
/// Its further vertices are `D = [0:n:-m]`, `E = [n:0:-l]`, `F = [m:-l:0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadrilateralScene {
    frame: ReferenceFrame,
    lmn: [f64; 3],
    vertices: [NormalizedPoint; 6],
    normalizers: [f64; 3],
}

impl QuadrilateralScene {
    pub fn new(frame: ReferenceFrame, lmn: [f64; 3]) -> Result<Self> {
        if !lmn.iter().all(|x| x.is_finite() && *x > 0.0) {
            return Err(GeometryError::DegenerateScene("l, m, n must be positive".into()));
        }
        let raw = quadrilateral_vertices(lmn);
        let s = frame.structure();
        let mut vertices = [frame.vertices()[0]; 6];
        for (i, v) in raw.iter().enumerate() {
            vertices[i] = normalize_point(&HPoint::from_real(v)?, s).map_err(|_| {
                GeometryError::DegenerateScene(format!("vertex {} is isotropic", VERTEX_NAMES[i]))
            })?;
        }
        if vertices.iter().any(|v| v.sign_class != vertices[0].sign_class)
            && s.kind() == crate::cayley_klein::PlaneKind::Hyperbolic
        {
            return Err(GeometryError::DegenerateScene(
                "vertices lie in different congruence classes".into(),
            ));
        }
        let normalizers = [3, 4, 5].map(|i| vertices[i].v.norm() / raw[i].norm());
        Ok(Self {
            frame,
            lmn,
            vertices,
            normalizers,
        })
    }

    pub fn frame(&self) -> &ReferenceFrame {
        &self.frame
    }

    pub fn lmn(&self) -> [f64; 3] {
        self.lmn
    }

    /// Normalized `A, B, C, D, E, F`.
    pub fn vertices(&self) -> &[NormalizedPoint; 6] {
        &self.vertices
    }

    /// `(d, e, f)` with `D° = d [0:n:-m]` and so on.
    pub fn normalizers(&self) -> [f64; 3] {
        self.normalizers
    }

    /// Side lines `x = 0`, `y = 0`, `z = 0` and `lx + my + nz = 0`.
    pub fn lines(&self) -> [HLine; 4] {
        let [l, m, n] = self.lmn;
        [
            HLine::real(1.0, 0.0, 0.0).unwrap(),
            HLine::real(0.0, 1.0, 0.0).unwrap(),
            HLine::real(0.0, 0.0, 1.0).unwrap(),
            HLine::real(l, m, n).unwrap(),
        ]
    }

    /// Circumcircles of `ABC`, `AEF`, `BDF`, `CDE`.
    pub fn circles(&self) -> Result<[Conic; 4]> {
        let mut out = [*self.frame.circum(); 4];
        for (slot, tri) in out.iter_mut().zip(COMPONENT_TRIANGLES.iter()) {
            let [a, b, c] = tri.map(|i| self.vertices[i].point());
            *slot = circumconic_through(&a, &b, &c, &self.frame)?;
        }
        Ok(out)
    }

    /// Radical lines `L_A, ..., L_F` at the six vertices.
    pub fn radical_lines(&self) -> Result<[HLine; 6]> {
        let tol = self.frame.tol();
        let v = &self.vertices;
        let mut out = Vec::with_capacity(6);
        for (i, others) in RADICAL_PAIRS {
            out.push(radical_line_at_vertex(&v[i], others.map(|j| &v[j]), tol)?);
        }
        Ok([out[0], out[1], out[2], out[3], out[4], out[5]])
    }
}

/// Relative concurrency slack accepted by the radical construction.
const CONCURRENCY_SLACK: f64 = 1e-6;

/// Closed form of the Miquel-Steiner point in a regular plane:
/// `[ef(d(m-n)+1) : -df(e(l-n)+1) : de(f(l-m)+1)]`.
pub fn miquel_point_regular(scene: &QuadrilateralScene) -> Result<MiquelResult> {
    if scene.frame.structure().is_singular() {
        return Err(GeometryError::WrongPlaneKind { expected: "regular" });
    }
    let [l, m, n] = scene.lmn;
    let [d, e, f] = scene.normalizers;
    let v = Vector3::new(
        e * f * (d * (m - n) + 1.0),
        -d * f * (e * (l - n) + 1.0),
        d * e * (f * (l - m) + 1.0),
    );
    let point = HPoint::from_real(&v)
        .map_err(|_| GeometryError::DegenerateScene("closed form vanishes".into()))?;
    Ok(MiquelResult {
        point,
        contact: Contact::Transversal,
        congruence_ok: true,
    })
}

/// Radical center of the four circles as `L_A x L_B`, checked against
/// `L_A x L_C`.
pub fn miquel_point_radical(scene: &QuadrilateralScene) -> Result<HPoint> {
    let tol = scene.frame.tol();
    let lines = scene.radical_lines()?;
    let degenerate = |_| GeometryError::DegenerateConstruction("radical lines coincide".into());
    let x = meet(&lines[0], &lines[1], tol).map_err(degenerate)?;
    let y = meet(&lines[0], &lines[2], tol).map_err(degenerate)?;
    let residual = x.distance(&y);
    if residual > CONCURRENCY_SLACK {
        return Err(GeometryError::NonConcurrentRadicalLines { residual });
    }
    Ok(x)
}

/// Largest normalized incidence residual of `p` against the six radical
/// lines.
pub fn radical_residual(scene: &QuadrilateralScene, p: &HPoint) -> Result<f64> {
    Ok(scene
        .radical_lines()?
        .iter()
        .map(|l| incidence(l, p))
        .fold(0.0, f64::max))
}

/// Miquel-Steiner point of four arbitrary lines `a, b, c, g`, labelled so
/// that `A = b x c`, `B = a x c`, `C = a x b`, `D = a x g`, `E = b x g`,
/// `F = c x g`.
///
/// Regular planes use the radical construction on the normalized vertices;
/// metric-affine planes return the common point of the four circles.
pub fn miquel_point_of_lines(frame: &ReferenceFrame, lines: [&HLine; 4]) -> Result<HPoint> {
    let tol = frame.tol();
    let s = frame.structure();
    let [a, b, c, g] = lines;
    let pairs = [(b, c), (a, c), (a, b), (a, g), (b, g), (c, g)];
    let mut raw = Vec::with_capacity(6);
    for (i, (x, y)) in pairs.iter().enumerate() {
        let p = meet(x, y, tol).map_err(|_| {
            GeometryError::DegenerateScene(format!("vertex {} is undefined", VERTEX_NAMES[i]))
        })?;
        if !p.is_real(tol) {
            return Err(GeometryError::ComplexPoint);
        }
        raw.push(HPoint::from_real(&p.re())?);
    }
    if !s.is_singular() {
        let mut verts = Vec::with_capacity(6);
        for (i, p) in raw.iter().enumerate() {
            verts.push(normalize_point(p, s).map_err(|_| {
                GeometryError::DegenerateScene(format!("vertex {} is isotropic", VERTEX_NAMES[i]))
            })?);
        }
        if verts.iter().any(|v| v.sign_class != verts[0].sign_class) {
            return Err(GeometryError::DegenerateScene(
                "vertices lie in different congruence classes".into(),
            ));
        }
        let mut radical = Vec::with_capacity(6);
        for (i, others) in RADICAL_PAIRS {
            radical.push(radical_line_at_vertex(&verts[i], others.map(|j| &verts[j]), tol)?);
        }
        let degenerate = |_| GeometryError::DegenerateConstruction("radical lines coincide".into());
        let x = meet(&radical[0], &radical[1], tol).map_err(degenerate)?;
        let residual = radical.iter().map(|l| incidence(l, &x)).fold(0.0, f64::max);
        if residual > CONCURRENCY_SLACK {
            return Err(GeometryError::NonConcurrentRadicalLines { residual });
        }
        return Ok(x);
    }
    let mut circles = Vec::with_capacity(4);
    for tri in COMPONENT_TRIANGLES {
        circles.push(circumconic_through(&raw[tri[0]], &raw[tri[1]], &raw[tri[2]], frame)?);
    }
    let off_circle = |p: &HPoint, conic: &Conic| {
        let v = p.coords();
        conic.eval(v).norm() / (conic.scale() * v.norm_squared())
    };
    let mut best: Option<(f64, HPoint)> = None;
    for hit in conic_intersections(&circles[0], &circles[1], tol)? {
        if !hit.real || hit.point.distance(&raw[0]) < 1e-6 {
            continue;
        }
        let p = HPoint::from_real(&hit.point.re())?;
        let r = off_circle(&p, &circles[2]).max(off_circle(&p, &circles[3]));
        if best.as_ref().map_or(true, |(b, _)| r < *b) {
            best = Some((r, p));
        }
    }
    match best {
        Some((r, p)) if r <= CONCURRENCY_SLACK => Ok(p),
        _ => Err(GeometryError::DegenerateScene("the four circles have no common point".into())),
    }
}

/// Raw vertices `A, B, C, D, E, F` of the quadrilateral with side lines
/// `x = 0`, `y = 0`, `z = 0` and `l x + m y + n z = 0`.
pub fn quadrilateral_vertices(lmn: [f64; 3]) -> [Vector3<f64>; 6] {
    let [l, m, n] = lmn;
    [
        Vector3::new(1.0, 0.0, 0.0),
        Vector3::new(0.0, 1.0, 0.0),
        Vector3::new(0.0, 0.0, 1.0),
        Vector3::new(0.0, n, -m),
        Vector3::new(n, 0.0, -l),
        Vector3::new(m, -l, 0.0),
    ]
}

/// Miquel-Steiner point in a metric-affine plane:
/// `(mn k1/(m-n) : nl k2/(n-l) : lm k3/(l-m))`.
pub fn miquel_point_affine(lmn: [f64; 3], frame: &ReferenceFrame) -> Result<MiquelResult> {
    let s = frame.structure();
    let k = s.k().ok_or(GeometryError::WrongPlaneKind {
        expected: "metric-affine",
    })?;
    let tol = frame.tol();
    let [l, m, n] = lmn;
    if !lmn.iter().all(|x| x.is_finite()) || lmn.contains(&0.0) {
        return Err(GeometryError::DegenerateScene("l, m, n must be nonzero".into()));
    }
    let close = |a: f64, b: f64| tol.close(a.into(), b.into());
    if close(l, m) || close(m, n) || close(n, l) {
        return Err(GeometryError::CoincidentParameters);
    }
    let v = Vector3::new(
        m * n * k[0] / (m - n),
        n * l * k[1] / (n - l),
        l * m * k[2] / (l - m),
    );
    let point = HPoint::from_real(&v)?;
    let pv = point.re();
    let contact = if tol.negligible(pv.sum(), pv.abs().sum()) {
        Contact::TangentialAtInfinity
    } else {
        Contact::Transversal
    };
    let pts: Vec<HPoint> = quadrilateral_vertices(lmn)
        .iter()
        .map(HPoint::from_real)
        .collect::<Result<_>>()?;
    let congruence_ok = pts
        .iter()
        .all(|p| pts.iter().all(|q| congruent(p, q, s).unwrap_or(false)));
    Ok(MiquelResult {
        point,
        contact,
        congruence_ok,
    })
}
