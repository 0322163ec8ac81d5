use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported rule: {0}")]
    UnsupportedRule(String),

    #[error("empty seed word")]
    EmptySeed,

    #[error("seed is not eventually periodic under the rule within the configured bound")]
    NotEventuallyPeriodic,

    #[error("requested radius {requested} exceeds the configured bound {bound}")]
    RadiusBound { requested: usize, bound: usize },

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("inflation factor is not a Pisot unit of the golden field: {0}")]
    NotPisot(String),

    #[error("renormalisation closure not reached: offending distance {0}")]
    Closure(String),

    #[error("renormalisation system has solution space of dimension {dim}, expected 1")]
    DegenerateSystem { dim: usize },

    #[error("approximant too shallow for a box-count fit: {0}")]
    InsufficientDepth(String),

    #[error("value out of range: {0}")]
    Range(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
