use thiserror::Error;

/// Errors raised by geometry construction and verification.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(usize),

    #[error("field order {0} exceeds the supported bound of 256")]
    FieldTooLarge(usize),

    #[error("element code {code} is out of range for GF({q})")]
    CodeOutOfRange { code: usize, q: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("geometry mismatch: {0}")]
    ContextMismatch(String),

    #[error("invalid polar space: {0}")]
    InvalidPolar(String),

    #[error("subspace is not a line")]
    NotALine,

    #[error("line set is empty")]
    EmptyLineSet,

    #[error("line set is not an m-cover (point multiplicities range over {min}..={max})")]
    NotACover { min: u32, max: u32 },

    #[error("line #{0} of the set is not totally isotropic")]
    NotIsotropic(usize),

    #[error("tangent lines are not admissible probes for parabolic duality")]
    TangentProbe,

    #[error("point set is not contained in the polar space")]
    NotInPolarSpace,

    #[error("polarities are not in companion position")]
    NotCompanion,

    #[error("no primitive polynomial of degree {degree} over GF({q}) in the table")]
    MissingPolynomial { degree: usize, q: usize },

    #[error("structural check failed: {0}")]
    Structural(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("duplicate line at line {0}")]
    DuplicateLine(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
