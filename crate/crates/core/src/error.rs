use thiserror::Error;

/// Errors shared by every layer of the crate.
///
/// All fallible operations return `Result<T>`; no public entry point
/// panics on bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The ring cap is 64 variables (monomials are stored as machine words).
    #[error("ring supports at most 64 variables, got {n}")]
    TooManyVariables { n: usize },

    /// Variable index outside 1..=n.
    #[error("variable index {index} out of range for {n} variables (indices are 1-based)")]
    InvalidVariable { index: usize, n: usize },

    /// A monomial listed the same variable twice.
    #[error("variable index {index} repeated within a monomial")]
    DuplicateVariable { index: usize },

    /// Operands live in rings with different variable counts.
    #[error("operands live in different rings: {left} vs {right} variables")]
    DimensionMismatch { left: usize, right: usize },

    /// Sum of homogeneous elements of different degrees is not homogeneous.
    #[error("cannot add homogeneous elements of degrees {left} and {right}")]
    DegreeMismatch { left: usize, right: usize },

    /// A degree argument fell outside the meaningful range for the ring.
    #[error("degree {degree} out of range for {n} variables")]
    DegreeOutOfRange { degree: usize, n: usize },

    /// Ideal generators must be nonzero.
    #[error("generator at position {position} is zero")]
    ZeroGenerator { position: usize },

    /// Degree vectors are nonempty lists of degrees >= 1.
    #[error("degree vector must be nonempty with all entries >= 1")]
    InvalidDegreeVector,

    /// The rank-classification routine only applies in degree 2.
    #[error("rank classification requires a quadratic element, got degree {degree}")]
    NotQuadratic { degree: usize },

    /// A matrix would exceed the configured memory budget.
    #[error(
        "matrix for degree {degree} needs {rows} x {cols} bits, over the budget of {limit_bits} bits"
    )]
    ResourceLimit {
        degree: usize,
        rows: u64,
        cols: u64,
        limit_bits: u64,
    },

    /// A series coefficient beyond the computed horizon was requested.
    #[error("coefficient {needed} requested but series horizon is {horizon}")]
    HorizonExceeded { needed: usize, horizon: usize },

    /// A bounded search ran out of room.
    #[error("search exhausted its limit of {limit} without success")]
    SearchLimitExceeded { limit: usize },

    /// A certificate failed validation.
    #[error("invalid certificate: {reason}")]
    InvalidCertificate { reason: String },

    /// The requested operation does not apply to the given parameters.
    #[error("not applicable: {reason}")]
    Inapplicable { reason: String },

    /// Malformed textual input.
    #[error("parse error: {message}")]
    Parse { message: String },

    /// I/O failure surfaced by the command-line layer.
    #[error("io error: {message}")]
    Io { message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
