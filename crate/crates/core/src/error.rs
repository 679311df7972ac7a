use thiserror::Error;

/// Errors produced by the spectral computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violates a type invariant.
    #[error("invalid input: {0}")]
    Validation(String),

    /// An argument lies outside the domain where the formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested approximation is not justified for the given parameters.
    #[error("regime error: {0}")]
    Regime(String),

    #[error("frequency {omega} exceeds the Nyquist limit {limit} of the sampled trajectory")]
    Nyquist { omega: f64, limit: f64 },

    #[error("singular integrand: {0}")]
    Singularity(String),

    /// The adaptive integrator ran out of subdivisions. The best estimate is kept.
    #[error("no convergence ({context}): value {value:e}, error estimate {error_estimate:e}")]
    NonConvergence {
        context: String,
        value: f64,
        error_estimate: f64,
    },

    #[error("integrand returned a non-finite value at x = {x}")]
    NaNEncountered { x: f64 },

    #[error("no interior minimum on [{lo}, {hi}]")]
    NoMinimumFound { lo: f64, hi: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// Prefixes the context of a convergence failure. Other variants pass through.
    pub fn with_context(self, ctx: impl AsRef<str>) -> Self {
        match self {
            Error::NonConvergence {
                context,
                value,
                error_estimate,
            } => Error::NonConvergence {
                context: format!("{}: {}", ctx.as_ref(), context),
                value,
                error_estimate,
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
