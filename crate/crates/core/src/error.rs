use thiserror::Error;

use crate::spectral::Spectrum;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("topology error: {0}")]
    Topology(String),

    #[error("degenerate triangle at face {face}")]
    DegenerateFace { face: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("mesh carries no ambient coordinates (abstract metric only)")]
    NoAmbientCoordinates,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("eigensolver did not converge after {iterations} iterations (worst residual {worst_residual:e})")]
    NoConvergence {
        iterations: usize,
        worst_residual: f64,
        partial: Box<Spectrum>,
    },

    #[error("Rayleigh quotient has zero denominator")]
    ZeroDenominator,

    #[error("stereographic projection from p is undefined at p")]
    ProjectionPole,

    #[error("measure is too atomic: largest atom fraction {fraction:.3e} exceeds {limit:.3e}")]
    AtomicMeasure { fraction: f64, limit: f64 },

    #[error("annulus search exhausted for k = {k} even at c = {c:e}")]
    SearchExhausted { k: usize, c: f64 },

    #[error("potential must be non-negative (vertex {vertex} has value {value})")]
    NegativePotential { vertex: usize, value: f64 },

    #[error("every face is singular; the pull-back volume is undefined")]
    AllFacesSingular,

    #[error("Hersch centering did not converge: residual {residual:e} after {iterations} iterations")]
    CenteringFailed { residual: f64, iterations: usize },

    #[error("mesh vertex {vertex} maps to the projection pole")]
    ProjectionSingular { vertex: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
