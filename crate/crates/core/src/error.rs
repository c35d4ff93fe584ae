//! Error type shared by the whole crate.

/// Errors raised by exact arithmetic and the invariant engines.
///
/// The split into variants mirrors how a front end has to react: usage
/// errors are caller bugs, arithmetic errors are mathematically impossible
/// requests, resource errors are tripped guards, and verification errors
/// mean a built-in cross-check failed.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Operands belong to different ambient fields.
    #[error("field descriptor mismatch")]
    DescriptorMismatch,

    /// Division by the zero element.
    #[error("division by zero")]
    DivisionByZero,

    /// A precondition on the inputs was violated.
    #[error("{0}")]
    Usage(String),

    /// The total-degree guard tripped; raising the limit on the field
    /// descriptor is the intended escape hatch.
    #[error("total degree {degree} exceeds the configured limit {limit}")]
    DegreeLimit { degree: u64, limit: u64 },

    /// A size guard other than the degree cap tripped.
    #[error("{0}")]
    Resource(String),

    /// An internal cross-check (dual-path agreement, witness replay,
    /// table cell validation) failed.
    #[error("verification failure: {0}")]
    Verification(String),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub fn verification(msg: impl Into<String>) -> Self {
        Error::Verification(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
