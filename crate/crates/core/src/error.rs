use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the geometry, smoothing, bounds and data modules.
///
/// Numeric payloads are stored as `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Error)]
pub enum Error {
    #[error("radius {r} lies outside the domain [{lo}, {hi}]")]
    OutOfDomain { r: f64, lo: f64, hi: f64 },

    #[error("warping function vanishes at r = {r}; curvature is singular there")]
    SingularAxis { r: f64 },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("empty interval [{lo}, {hi}]")]
    EmptyInterval { lo: f64, hi: f64 },

    #[error("quadrature on [{lo}, {hi}] did not converge: error estimate {error_estimate:e} after {panels} panels (target {target:e})")]
    NonConvergent {
        lo: f64,
        hi: f64,
        error_estimate: f64,
        panels: usize,
        target: f64,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("smoothing collar width {delta} exceeds the available margin {limit}")]
    Width { delta: f64, limit: f64 },

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("line {line}: {message}")]
    Validation { line: u64, message: String },

    #[error("cannot plot: {0}")]
    Plot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable category used in `error:<category>:` prefixes.
    pub fn category(&self) -> &'static str {
        match self {
            Error::OutOfDomain { .. } => "domain",
            Error::SingularAxis { .. } => "singular",
            Error::InvalidParameter { .. } => "parameter",
            Error::EmptyInterval { .. } => "interval",
            Error::NonConvergent { .. } => "numeric",
            Error::Precondition(_) => "precondition",
            Error::Width { .. } => "width",
            Error::NoRoot(_) => "domain",
            Error::Parse { .. } | Error::Csv(_) => "parse",
            Error::Validation { .. } => "validation",
            Error::Plot(_) => "plot",
            Error::Io(_) => "io",
        }
    }

    pub(crate) fn parameter(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}
