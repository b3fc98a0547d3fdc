use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation (negative time, bad grid, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A mixture arm or trial configuration violates its invariants.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The configuration is valid but the requested quantity is not supported for it.
    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    /// The data cannot support the requested estimate (no events, constant covariate, ...).
    #[error("estimation error: {0}")]
    Estimation(String),

    /// A requested time lies beyond the support of an estimated curve.
    #[error("time {requested} is beyond the estimated support; maximum supported time is {max_supported}")]
    BeyondSupport { requested: f64, max_supported: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
