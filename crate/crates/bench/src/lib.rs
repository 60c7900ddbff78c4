//! Fixed inputs shared by the benchmarks.

use ckm_core::{HPoint, QuadrilateralScene, ReferenceFrame, TetragonScene, Tolerance};

/// Generic point of a regular elliptic plane.
pub const Q: [f64; 3] = [0.1, 0.2, -0.3];
/// Lemoine point of a Euclidean plane.
pub const K: [f64; 3] = [1.0, 1.5, 2.0];
pub const LMN: [f64; 3] = [1.0, 2.0, 3.0];
pub const D: [f64; 3] = [1.0, 2.0, 4.0];

pub fn regular_frame() -> ReferenceFrame {
    ReferenceFrame::regular(Q, &Tolerance::default()).expect("regular frame")
}

pub fn euclidean_frame() -> ReferenceFrame {
    ReferenceFrame::from_lemoine(K, &Tolerance::default()).expect("euclidean frame")
}

pub fn quadrilateral() -> QuadrilateralScene {
    QuadrilateralScene::new(regular_frame(), LMN).expect("quadrilateral")
}

pub fn tetragon() -> TetragonScene {
    TetragonScene::new(regular_frame(), D).expect("tetragon")
}

/// Three points in general position.
pub fn triangle() -> [HPoint; 3] {
    [[1.0, 2.0, 3.0], [2.0, -1.0, 1.0], [-1.0, 1.0, 2.0]].map(|v| HPoint::from_real(&v.into()).expect("point"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        quadrilateral();
        tetragon();
        euclidean_frame();
        triangle();
    }
}
