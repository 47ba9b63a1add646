use thiserror::Error;

/// Every failure the library can report.
///
/// Several variants are not bugs but signals to resample (`DegeneratePair`,
/// `LineInSpan`, `SamplingExhausted`, ...); callers in the suites treat them
/// that way.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a supported prime modulus")]
    InvalidPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("base point and direction are proportional")]
    DegeneratePair,
    #[error("linear map does not have full column rank")]
    RankDeficient,
    #[error("sampling exhausted after {0} attempts")]
    SamplingExhausted(usize),
    #[error("divisor has a Weierstrass point in its support")]
    UnsupportedSupport,
    #[error("map is indeterminate at the given point")]
    IndeterminateAt,
    #[error("hyperplane is degenerate for this computation")]
    DegenerateHyperplane,
    #[error("secant line lies inside the span")]
    LineInSpan,
    #[error("points are not in linearly general position")]
    DegenerateConfiguration,
    #[error("kernel dimension did not stabilize within budget ({rows} rows, last dimension {dim})")]
    Unstabilized { rows: usize, dim: usize },
    #[error("inclusion of linear systems violated: {0}")]
    InclusionViolated(String),
    #[error("relation fit is ambiguous: kernel dimension {0}")]
    FitAmbiguous(usize),
    #[error("no seed produced a fully split configuration")]
    NoSplitSeed,
    #[error("expected {expected} singular points, found {found}")]
    NodeCountMismatch { expected: usize, found: usize },
    #[error("suite {suite} is not supported for genus {genus}")]
    UnsupportedCombination { suite: String, genus: usize },
    #[error("randomized splitting did not terminate")]
    InternalRandomnessExhausted,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("invalid document: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
