use nalgebra::DMatrix;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    /// The target lies outside the injectivity domain of the base point.
    #[error("log undefined: {0}")]
    LogUndefined(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Frechet mean did not converge after {iterations} iterations (gradient norm {grad_norm:e})")]
    NoConvergence {
        iterations: usize,
        grad_norm: f64,
        last_iterate: DMatrix<f64>,
    },

    #[error("points not in a common geodesic domain: {0}")]
    NotCommonDomain(String),

    #[error("kernel matrix is ill-conditioned (condition estimate {condition:e}); try a different shape parameter")]
    IllConditioned { condition: f64 },

    #[error("log failed for samples {indices:?} at the chosen anchor")]
    SamplesOutsideDomain { indices: Vec<usize> },

    #[error("query outside model support at x = {0:?}")]
    EmptyActiveSet(Vec<f64>),

    #[error("x outside data support: no sample has a positive weight at {0:?}")]
    OutsideSupport(Vec<f64>),

    #[error("anchor selection failed: no R in {r_min}..={r_max} satisfied the covering threshold")]
    AnchorSelectionFailed { r_min: usize, r_max: usize },

    #[error("unsupported model format version `{0}`")]
    Version(String),

    #[error("checksum mismatch in model file")]
    Checksum,

    #[error("malformed file: {0}")]
    Malformed(String),

    #[error("data error at row {row}: {message}")]
    Data { row: usize, message: String },

    #[error("no samples")]
    NoSamples,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub(crate) fn mismatch(expected: impl ToString, got: impl ToString) -> Error {
    Error::DimensionMismatch {
        expected: expected.to_string(),
        got: got.to_string(),
    }
}
