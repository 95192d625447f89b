use thiserror::Error;

use crate::expr::{EvalError, ParseError};

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("metric is not symmetric (relative asymmetry {0:e})")]
    Asymmetric(f64),
    #[error("metric is degenerate (normalized determinant {0:e})")]
    Degenerate(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {dim} is outside the supported range 1..={max}")]
    UnsupportedDimension { dim: usize, max: usize },
    #[error("invalid indices: {0}")]
    InvalidIndices(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("grade {grade} is out of range for dimension {dim}")]
    GradeOutOfRange { grade: usize, dim: usize },
    #[error("multivector is not homogeneous")]
    NotHomogeneous,
    #[error("series did not converge within {0} terms")]
    NonConvergence(usize),
    #[error("matrix is not an isometry of the metric")]
    NotIsometry,
    #[error("isometry is not induced by an element of the spin group")]
    NotSpinIsometry,
    #[error("not a spin group element: {0}")]
    NotSpin(String),
    #[error("point {0:?} lies outside the chart domain")]
    OutsideDomain(Vec<f64>),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Invalid(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
