use thiserror::Error;

/// Errors raised by the counting, estimation and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("balance violation: {m}·{s} ≠ {n}·{t} ({ms} ≠ {nt})")]
    Balance {
        m: u64,
        s: u64,
        n: u64,
        t: u64,
        ms: u128,
        nt: u128,
    },

    #[error("dimension {name} must be positive")]
    NonPositiveDimension { name: &'static str },

    #[error("density is zero; estimators require s, t > 0")]
    ZeroDensity,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit exceeded: {what} (cap {cap})")]
    ResourceLimit { what: String, cap: u128 },

    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
