use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong inside the algorithms.
///
/// Precondition failures and algorithmic diagnostics are kept apart so that
/// frontends can map them to different exit codes (see [`Error::is_diagnostic`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible value bases")]
    IncompatibleBases,
    #[error("invalid surd basis: {0}")]
    InvalidBasis(String),
    #[error("nonpositive divisor")]
    NonpositiveDivisor,
    #[error("negative dividend")]
    NegativeDividend,
    #[error("nonpositive weight")]
    NonpositiveWeight,
    #[error("weights are not rationally independent")]
    DependentWeights,
    #[error("dimension too small")]
    DimensionTooSmall,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("value order violated")]
    ValueOrderViolated,
    #[error("nonpositive value")]
    NonpositiveValue,
    #[error("imprimitive relation")]
    ImprimitiveRelation,
    #[error("nonpositive dependent value")]
    NonpositiveDependentValue,
    #[error("{0} cap exceeded")]
    CapExceeded(&'static str),
    #[error("not allowable along valuation")]
    NotAllowable,
    #[error("degenerate center")]
    DegenerateCenter,
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid permutation")]
    InvalidPermutation,
    #[error("IMT not defined")]
    ImtUndefined,
    #[error("valuation does not dominate IMT target")]
    ImtNotDominated,
    #[error("not unimodular")]
    NotUnimodular,
    #[error("singular matrix")]
    Singular,
    #[error("negative entry in exponent matrix")]
    NegativeEntry,
    #[error("move {index}: {source}")]
    Move {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("value of zero is infinite")]
    ZeroPolynomial,
    #[error("negative exponent")]
    NegativeExponent,
    /// A step that the underlying proof guarantees failed to hold.
    #[error("internal assertion failed: {0}")]
    Assertion(String),
}

impl Error {
    /// True for failures of the algorithm itself (caps, broken invariants)
    /// as opposed to bad input.
    pub fn is_diagnostic(&self) -> bool {
        match self {
            Error::CapExceeded(_) | Error::Assertion(_) => true,
            Error::Move { source, .. } => source.is_diagnostic(),
            _ => false,
        }
    }
}
