use thiserror::Error;

/// Errors raised by the simulator.
///
/// `Config` covers anything wrong with user-supplied parameters; `Numeric`
/// covers failures of the numerical machinery itself.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:.3e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("exact pole hit: {0}")]
    Pole(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// True for errors caused by the inputs rather than the numerics.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Json(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
