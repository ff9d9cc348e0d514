use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("gamma function pole at {arg} ({context})")]
    Pole { arg: f64, context: String },

    #[error("quadrature tolerance not met: estimate {estimate:e}, error estimate {error:e}")]
    ToleranceNotMet { estimate: f64, error: f64 },

    #[error("hypergeometric series diverges for |z| = {z} >= 1")]
    Divergence { z: f64 },

    #[error("singular pivot in tridiagonal solve at row {row}")]
    SingularPivot { row: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("negative delta requires a compactly supported profile")]
    MissingSupport,

    #[error("derivative of order {order} is not available for this profile")]
    DerivativeUnavailable { order: usize },

    #[error("coefficient A vanishes; first-order perturbation is undefined")]
    DegenerateA,

    #[error("non-positive value of {what}: {value}")]
    NonPositive { what: &'static str, value: f64 },

    #[error("wetting front reached the far boundary at t = {t}")]
    DomainOverflow { t: f64 },

    #[error("clamped undershoot mass {clamped:e} exceeds 1e-6 of total mass {total:e}")]
    ExcessiveClamping { clamped: f64, total: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid profile: {0}")]
    Validation(String),

    #[error("level {level} not crossed by profile at t = {time}")]
    LevelNotCrossed { level: f64, time: f64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
