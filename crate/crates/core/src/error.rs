use thiserror::Error;

use crate::mesh::{EdgeId, FaceId};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("face list is empty")]
    EmptyMesh,
    #[error("vertex index {vertex} out of range (N = {num_vertices})")]
    VertexOutOfRange { vertex: usize, num_vertices: usize },
    #[error("non-manifold: {0}")]
    NonManifold(String),
    #[error("face-edge incidence graph is disconnected")]
    Disconnected,
    #[error("non-orientable gluing at face {face} side {side}")]
    NonOrientable { face: usize, side: usize },
    #[error("edge {0:?} has both sides on one face; flip undefined")]
    DegenerateFlip(EdgeId),
    #[error("invalid vertex weight epsilon = {value} at vertex {vertex}")]
    InvalidEpsilon { vertex: usize, value: f64 },
    #[error("invalid u = {0}: hyperbolic circle-packing vertices need u < 0")]
    InvalidU(f64),
    #[error("invalid radius r = {0}: radii must be positive")]
    InvalidR(f64),
    #[error("degenerate edge length at edge {edge:?}")]
    DegenerateLength { edge: Option<EdgeId> },
    #[error("degenerate triangle{}", .face.map(|f| format!(" at face {}", f.0)).unwrap_or_default())]
    DegenerateTriangle { face: Option<FaceId> },
    #[error("developed quadrilateral is folded (angle sum at a diagonal endpoint >= pi)")]
    FoldedQuad,
    #[error("matrix is not positive semi-definite (eigenvalue {eigenvalue:e}, scale {scale:e})")]
    NotPsd { eigenvalue: f64, scale: f64 },
    #[error("matrix is not symmetric (residual {0:e})")]
    NotSymmetric(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("InvalidTarget: {0}")]
    InvalidTarget(String),
    #[error("step failure at t = {t}: {reason}")]
    StepFailure { t: f64, reason: String },
    #[error("flip limit exceeded ({0} flips)")]
    FlipLimitExceeded(usize),
    #[error("quadrature did not converge (last estimate {0})")]
    QuadratureNonConvergence(f64),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
