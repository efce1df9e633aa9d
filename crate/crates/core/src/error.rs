use thiserror::Error;

/// Errors raised by the matching, commitment and certificate machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Invalid or inconsistent parameters (moduli, exponents, policies).
    #[error("configuration error: {0}")]
    Config(String),
    /// Caller-supplied data violates an operation's precondition.
    #[error("invalid input: {0}")]
    Input(String),
    /// Arithmetic outside the operation's domain (division by zero and friends).
    #[error("domain error: {0}")]
    Domain(String),
    /// The field cannot support the request, e.g. an NTT length beyond its two-adicity.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A pattern was not found in the legal pattern set.
    #[error("pattern is not in the legal pattern set")]
    NotMember,
    /// The pattern fingerprint is not a root of the window polynomial.
    #[error("pattern fingerprint is not a root of the window polynomial")]
    NotContained,
    /// The pattern fingerprint is a root of the window polynomial.
    #[error("pattern fingerprint is a root of the window polynomial")]
    IsContained,
    /// A structure could not be built from the given inputs.
    #[error("build error: {0}")]
    Build(String),
}

pub type Result<T> = std::result::Result<T, Error>;
