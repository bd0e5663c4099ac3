use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gauge argument must be positive, got {0}")]
    Domain(f64),

    #[error("probe {t} lies outside the table range [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("could not resolve delta for epsilon {epsilon}: {reason}")]
    Resolution { epsilon: f64, reason: String },

    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },

    #[error("entry ({row}, {col}) is {value}; distances must be finite and nonnegative")]
    InvalidEntry { row: usize, col: usize, value: f64 },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("two-metric table: {0}")]
    TwoMetric(String),

    #[error("supplied metric fails its axioms: {0}")]
    MetricAxiom(String),

    #[error("sandwich condition fails at ({x}, {y}): {detail}")]
    Sandwich {
        x: String,
        y: String,
        detail: String,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("map is not a contraction: observed ratio {ratio} at step {step}")]
    NotContraction { ratio: f64, step: usize },

    #[error("iterate left the declared point set at step {step}")]
    OutsideDomain { step: usize },
}
