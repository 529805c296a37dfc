use thiserror::Error;

use crate::cxcore::PointClass;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("expected a negative (interior) point, got a {0:?} point")]
    NonInteriorPoint(PointClass),
    #[error("zero vector has no projective class")]
    ZeroVector,
    #[error("matrix is not Hermitian of signature (2,1): {0}")]
    BadForm(String),
    #[error("matrix does not preserve the Hermitian form (residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("matrix determinant {det} is not 1")]
    BadDeterminant { det: num_complex::Complex64 },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("element has no null eigenvector")]
    NoNullEigenvector,
    #[error("element fixes a whole circle of boundary points")]
    FixedCircle,
    #[error("element is not hyperbolic")]
    NotHyperbolic,
    #[error("iteration count must be at least 1")]
    ZeroIterations,

    #[error("invalid triangle parameters: {0}")]
    InvalidParams(String),
    #[error("no triangle with these parameters: Gram determinant {det:e} is not negative")]
    ExistenceViolated { det: f64 },
    #[error("Gram matrix eigenvalues {eigenvalues:?} do not have signature (2,1)")]
    WrongSignature { eigenvalues: [f64; 3] },
    #[error("vector is not positive (<l,l> = {norm})")]
    NotPositiveVector { norm: f64 },
    #[error("a pairwise Hermitian product vanishes; angular invariant undefined")]
    AsymptoticDegenerate,
    #[error("threshold index n must be at least 4, got {0}")]
    BadN(u32),
    #[error("alpha {alpha} outside [{lo}, {hi}]")]
    OutOfRange { alpha: f64, lo: f64, hi: f64 },
    #[error("no phase solves the trace equation (cos = {cos})")]
    NoSolution { cos: f64 },
    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("angles do not form a hyperbolic triangle")]
    NotHyperbolicTriangle,
    #[error("side pairing {label} does not pair two sides of the polygon")]
    PairingMismatch { label: String },
    #[error("geodesics share an ideal endpoint")]
    SharedEndpoint,
    #[error("geodesic does not meet the polygon in a chord")]
    MissesPolygon,
    #[error("chord system did not close after {0} steps")]
    NoClosure(usize),
    #[error("two chords coincide")]
    DegenerateTangency,

    #[error("point landed within tolerance of a triangle boundary")]
    NumericalAmbiguity,
    #[error("quotient is not a genus-2 surface (Euler characteristic {euler})")]
    NotASurface { euler: i64 },
    #[error("word is not in the surface subgroup")]
    NotInGamma,
    #[error("invalid cover: {0}")]
    BadCover(String),
}
