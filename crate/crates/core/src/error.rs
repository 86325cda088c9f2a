use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("argument outside the domain of {0}")]
    Domain(&'static str),
    #[error("complex logarithm argument straddles the branch cut on the negative real axis")]
    BranchCut,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("division by a ball containing zero")]
    DivisionByZero,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("cannot parse polynomial: {0}")]
    PolyParse(String),
    #[error("hint contains no root of the polynomial")]
    NoRootInHint,
    #[error("hint does not isolate a single root")]
    AmbiguousHint,
    #[error("zero raised to a negative power")]
    ZeroToNegativePower,
    #[error("no factor vanishes at the numeric point")]
    InconsistentHint,
    #[error("all coefficients of the linear form are zero")]
    AllZeroCoefficients,
    #[error("algebraic number does not lie on the unit circle")]
    NotUnitModulus,
    #[error("algebraic number is a root of unity of order {0}")]
    RootOfUnity(u64),
    #[error("no solution with index {index} (only {count} found)")]
    NoSuchSolution { index: usize, count: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
