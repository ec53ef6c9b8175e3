use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input or a violated domain invariant.
    Validation,
    /// A numerical procedure did not produce a usable answer.
    Numerical,
    /// Reading or writing files.
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),

    #[error("missing region: {0}")]
    MissingRegion(String),

    #[error("unknown region '{given}'; valid names: {valid}")]
    UnknownRegion { given: String, valid: String },

    #[error("validation error at row {row}, column '{column}': {message}")]
    InvalidValue {
        row: usize,
        column: String,
        message: String,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("human mass is clamped (infinite); use the clamped limit instead of the free-recoil formula")]
    ClampedHumanMass,

    #[error("step size {dt} s is too coarse for natural period {period} s (must be below period/10)")]
    StepTooLarge { dt: f64, period: f64 },

    #[error("structurally constrained direction: u^T Lambda^-1 u = {0:e} kg^-1")]
    ConstrainedDirection(f64),

    #[error("inverse kinematics did not converge after {iterations} iterations (position error {position_error:e} m)")]
    Unreachable { iterations: usize, position_error: f64 },

    #[error("invalid robot model: {0}")]
    Model(String),

    #[error("sweep error: {0}")]
    Sweep(String),

    #[error("report error: missing combination {0}")]
    MissingCombination(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::StepTooLarge { .. } | Error::ConstrainedDirection(_) | Error::Unreachable { .. } => {
                ErrorKind::Numerical
            }
            Error::Io(_) => ErrorKind::Io,
            _ => ErrorKind::Validation,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
