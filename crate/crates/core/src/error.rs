use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("digit stream too short: {available_bits} bits available, {needed_bits} needed")]
    UnevaluatableDigitStream { needed_bits: u32, available_bits: u32 },
    #[error("precision insufficient after reaching {bits} bits")]
    PrecisionInsufficient { bits: u32 },
    #[error("sequence lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("theta is zero")]
    ZeroTheta,
    #[error("theta is rational")]
    RationalTheta,
    #[error("no scaling witness found at index {index} with search bound {bound}")]
    WitnessNotFound { index: usize, bound: u64 },
    #[error("search exhausted at stage {stage} with bound {bound}")]
    SearchExhausted { stage: usize, bound: String },
    #[error("lattice rows are linearly dependent")]
    DependentRows,
    #[error("element is not positive in the integral basis order")]
    NotPositive,
    #[error("theta is K-rational at place {place}")]
    KRational { place: usize },
    #[error("enumeration size {size} exceeds cap {cap}")]
    EnumerationCapExceeded { size: String, cap: u64 },
    #[error("map is not a field automorphism: {0}")]
    NotAutomorphism(String),
    #[error("conjugate product has a non-integral coefficient at index {index}")]
    NonIntegralCoefficients { index: usize },
    #[error("unsupported projection: {0}")]
    UnsupportedProjection(String),
    #[error("wrong instance shape: {0}")]
    WrongInstanceShape(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("division by an interval containing zero")]
    DivisionByZero,
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 2,
            Error::PrecisionInsufficient { .. }
            | Error::WitnessNotFound { .. }
            | Error::SearchExhausted { .. }
            | Error::EnumerationCapExceeded { .. }
            | Error::CapExceeded(_)
            | Error::UnevaluatableDigitStream { .. } => 4,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
