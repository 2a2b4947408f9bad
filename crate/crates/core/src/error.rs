use thiserror::Error;

/// Errors raised by lattice, system and limit operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be positive")]
    ZeroDimension,

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid scalar literal `{0}`")]
    InvalidScalar(String),

    #[error("not a lattice homomorphism: row {row} has more than one nonzero entry")]
    NotLatticeHom { row: usize },

    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("extension rule exhausted at level {level}")]
    ExtensionExhausted { level: usize },

    #[error("levels start at 1 and must satisfy the requested order (got {from} -> {to})")]
    InvalidLevels { from: usize, to: usize },

    #[error("operation requires injective connecting maps (step {level} is not injective)")]
    InjectivityRequired { level: usize },

    #[error("operation requires surjective connecting maps (step {level} is not surjective)")]
    SurjectivityRequired { level: usize },

    #[error("thread is not compatible at level {level}")]
    CompatibilityError { level: usize },

    #[error("depth {available} is insufficient, {required} required")]
    DepthInsufficient { required: usize, available: usize },

    #[error("operands belong to different systems")]
    SystemMismatch,

    #[error("commuting square fails at level {level}")]
    SquareFails { level: usize },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("element does not belong to the {expected} model")]
    ModelMismatch { expected: &'static str },

    #[error("family is zero at every level up to depth {depth}")]
    AllZeroUpToDepth { depth: usize },

    #[error("certificate refused: `{flag}` does not hold")]
    CertificateRefused { flag: &'static str },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("unknown demo `{0}`")]
    UnknownDemo(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
