use thiserror::Error;

/// Error type shared by all solver and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Inconsistent grid or run configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Query outside the coverage of a trajectory or profile.
    #[error("range error: {0}")]
    Range(String),

    /// Evolution blew past the scale-aware guard `1/dr`.
    #[error("numerical divergence at t = {time}")]
    Divergence { time: f64 },

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature tolerance not reached: achieved {achieved:e}, requested {requested:e}")]
    Precision { achieved: f64, requested: f64 },

    /// Operation beyond what the implementation supports (e.g. stencil order).
    #[error("capability error: {0}")]
    Capability(String),

    /// Data fails a structural requirement (decay, finiteness, shape).
    #[error("data error: {0}")]
    Data(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
    pub fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }
    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }
}
