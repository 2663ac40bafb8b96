use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coefficient fields differ: {left:?} vs {right:?}")]
    FieldMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },

    #[error("division by zero in coefficient field")]
    ZeroDenominator,

    #[error("degree {degree} out of range 0..={max}")]
    Degree { degree: i64, max: usize },

    #[error("model inconsistency: {0}")]
    ModelInconsistency(String),

    #[error("invalid model at generator {generator:?}: {reason}")]
    InvalidModel { generator: String, reason: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameter: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    Shape(String),

    #[error("resonant frequency ({m}, {n}): m + alpha*n vanishes exactly")]
    Resonance { m: i64, n: i64 },

    #[error("obstruction: nonzero mean {re} + {im}i")]
    Obstruction { re: f64, im: f64 },

    #[error("element with |trace| = {trace} is not hyperbolic")]
    NotHyperbolic { trace: f64 },

    #[error("unknown model {0:?}")]
    UnknownModel(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
