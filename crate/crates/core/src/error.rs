use thiserror::Error;

/// Everything that can go wrong inside the kernel.
///
/// Variants are deliberately fine-grained: the verification harness reports
/// them verbatim, and several of them (e.g. [`GeometryError::MiquelPointAbsent`])
/// are expected outcomes rather than bugs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
    #[error("homogeneous vector is zero or not finite")]
    ZeroVector,
    #[error("arguments are projectively equal")]
    CoincidentArguments,
    #[error("point lies in the kernel of the conic matrix")]
    SingularPair,
    #[error("conics are projectively equal")]
    IdenticalConics,
    #[error("no degenerate member found in the conic pencil")]
    NoDegenerateMemberFound,
    #[error("conics share a line component")]
    SharedComponent,
    #[error("elements do not pass through a common point / lie on a common line")]
    NotCoincident,
    #[error("degenerate cross-ratio quadruple")]
    DegenerateQuadruple,
    #[error("unsupported absolute form: {0}")]
    UnsupportedSignature(String),
    #[error("singular absolute form requires a circumcenter")]
    MissingCircumcenter,
    #[error("forbidden circumcenter: {0}")]
    ForbiddenCircumcenter(String),
    #[error("point is isotropic")]
    IsotropicPoint,
    #[error("point is not real")]
    ComplexPoint,
    #[error("points are not congruent")]
    NotCongruent,
    #[error("linear combination vanishes")]
    ZeroCombination,
    #[error("reference points are collinear")]
    CollinearFrame,
    #[error("q coefficient equals +1 or -1")]
    DegenerateQ,
    #[error("triangle vertices are collinear")]
    CollinearVertices,
    #[error("vertices belong to different congruence classes")]
    MixedCongruenceClasses,
    #[error("linear system is singular")]
    SingularSystem,
    #[error("circle center is isotropic")]
    NoAnisotropicCenter,
    #[error("conic is not a circle of this plane")]
    NotACircle,
    #[error("degenerate construction: {0}")]
    DegenerateConstruction(String),
    #[error("degenerate scene: {0}")]
    DegenerateScene(String),
    #[error("radical lines are not concurrent (residual {residual:e})")]
    NonConcurrentRadicalLines { residual: f64 },
    #[error("a diagonal point of the tetragon is isotropic")]
    IsotropicDiagonalPoint,
    #[error("degenerate tetragon: {0}")]
    DegenerateTetragon(String),
    #[error("no convergence after {iterations} iterations and {restarts} restarts")]
    NoConvergence { iterations: usize, restarts: usize },
    #[error("the Miquel-Steiner point of this tetragon does not exist")]
    MiquelPointAbsent,
    #[error("line parameters must be pairwise distinct")]
    CoincidentParameters,
    #[error("Miquel-Steiner point lies on the line at infinity")]
    MiquelAtInfinity,
    #[error("operation undefined in a galilean plane")]
    GalileanPlane,
    #[error("angle leg passes through a circular point")]
    IsotropicLeg,
    #[error("point does not lie on the circle")]
    PointNotOnCircle,
    #[error("operation requires a {expected} plane")]
    WrongPlaneKind { expected: &'static str },
}

pub type Result<T> = std::result::Result<T, GeometryError>;
