//! Seeded scene generation.
//!
//! Every trial draws from `ChaCha8Rng::seed_from_u64(seed)` switched to
//! stream `trial`, so trial `t` of a run is reproducible on its own and
//! independent of how trials are scheduled across threads.

use ckm_core::{PlaneKind, QuadrilateralScene, ReferenceFrame, Tolerance};
use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{HarnessError, Result};
use crate::scenario::{triple, PlaneSpec, Scenario, SceneSpec};

/// Rejections allowed before a generator gives up.
pub const MAX_REJECTIONS: usize = 10_000;

/// Smallest accepted magnitude of a normalizer radicand `phi(v)`.
pub const MIN_RADICAND: f64 = 1e-6;

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn rejection<T>(rng: &mut ChaCha8Rng, mut draw: impl FnMut(&mut ChaCha8Rng) -> Option<T>) -> Result<T> {
    for _ in 0..MAX_REJECTIONS {
        if let Some(x) = draw(rng) {
            return Ok(x);
        }
    }
    Err(HarnessError::GenerationExhausted(MAX_REJECTIONS))
}

/// Rounds to six decimals so that generated scenarios stay readable.
pub fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

fn signed(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let x = rng.gen_range(lo..hi);
    if rng.gen::<bool>() {
        x
    } else {
        -x
    }
}

/// One draw of a plane of the requested kind; `None` when the draw is
/// rejected.
pub fn sample_plane(kind: PlaneKind, rng: &mut ChaCha8Rng) -> Option<(PlaneSpec, ReferenceFrame)> {
    let tol = Tolerance::default();
    let spec = match kind {
        PlaneKind::Elliptic | PlaneKind::Hyperbolic => {
            let span = if kind == PlaneKind::Elliptic { 0.95 } else { 3.0 };
            let q = [(); 3].map(|_| round6(rng.gen_range(-span..span)));
            if q.iter().any(|x| (x.abs() - 1.0).abs() < 0.05) {
                return None;
            }
            PlaneSpec::regular(kind, q)
        }
        PlaneKind::Euclidean => {
            // squared side lengths of a triangle
            let a = rng.gen_range(0.5..2.0);
            let b = rng.gen_range(0.5..2.0);
            let lo = (a - b) * (a - b);
            let hi = (a + b) * (a + b);
            let c2 = rng.gen_range(lo + 0.05 * (hi - lo)..hi - 0.05 * (hi - lo));
            PlaneSpec::lemoine(kind, [round6(a * a), round6(b * b), round6(c2)])
        }
        PlaneKind::Minkowski => {
            let k = [(); 3].map(|_| round6(signed(rng, 0.2, 5.0)));
            PlaneSpec::lemoine(kind, k)
        }
        PlaneKind::Galilean => {
            // dyadic a, b keep rho^2 = 0 exact for k = (a^2, b^2, (a + b)^2)
            let a = rng.gen_range(2..=24) as f64 / 8.0;
            let b = rng.gen_range(2..=24) as f64 / 8.0;
            let mut k = [a * a, b * b, (a + b) * (a + b)];
            k.rotate_left(rng.gen_range(0..3));
            PlaneSpec::lemoine(kind, k)
        }
    };
    let frame = spec.frame(&tol).ok()?;
    Some((spec, frame))
}

/// One draw of `(l, m, n)` for a quadrilateral over `frame`.
pub fn sample_lmn(rng: &mut ChaCha8Rng, frame: &ReferenceFrame) -> Option<[f64; 3]> {
    let lmn = [(); 3].map(|_| round6(rng.gen_range(0.2..3.0)));
    let [l, m, n] = lmn;
    let top = l.max(m).max(n);
    if (l - m).abs() < 0.05 * top || (m - n).abs() < 0.05 * top || (n - l).abs() < 0.05 * top {
        return None;
    }
    let s = frame.structure();
    if !s.is_singular() {
        // A, B, C have phi = 1; D, E, F must be in the same class
        let verts = [
            Vector3::new(0.0, n, -m),
            Vector3::new(n, 0.0, -l),
            Vector3::new(m, -l, 0.0),
        ];
        if verts.iter().any(|v| s.form(v) < MIN_RADICAND) {
            return None;
        }
    }
    QuadrilateralScene::new(frame.clone(), lmn).ok()?;
    Some(lmn)
}

/// A random quadrilateral scenario of the given plane kind.
pub fn random_scene(kind: PlaneKind, seed: u64) -> Result<Scenario> {
    let mut rng = trial_rng(seed, 0);
    let (plane, lmn) = rejection(&mut rng, |r| {
        let (plane, frame) = sample_plane(kind, r)?;
        let lmn = sample_lmn(r, &frame)?;
        Some((plane, lmn))
    })?;
    let check = if kind.is_metric_affine() { "affine" } else { "thm1" };
    Ok(Scenario {
        plane,
        scene: Some(SceneSpec::Quadrilateral { lmn: triple(lmn) }),
        seed: Some(seed),
        checks: vec![check.to_owned()],
    })
}
