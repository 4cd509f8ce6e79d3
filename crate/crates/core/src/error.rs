use thiserror::Error;

/// Errors raised by state construction, the steering functional, and the CLI front end.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A 4x4 matrix failed one or more density-matrix invariants.
    #[error("invalid density matrix: {}", .0.join("; "))]
    InvalidState(Vec<String>),

    /// The criterion is only established for states with vanishing local Bloch vectors.
    #[error(
        "not a T state: largest local Bloch component is {0:e}; \
         steerability is only decided for states whose local Bloch vectors vanish"
    )]
    NotTState(f64),

    /// Adaptive sphere quadrature hit its order cap.
    #[error(
        "quadrature did not converge: best estimate {best} differs by {difference:e} \
         from the previous order at {order} polar nodes"
    )]
    Convergence {
        best: f64,
        difference: f64,
        order: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
