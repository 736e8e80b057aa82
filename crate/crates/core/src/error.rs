use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid codebook: {0}")]
    InvalidCodebook(String),

    #[error("crossover probability must lie strictly between 0 and 1/2, got {0}")]
    InvalidProbability(String),

    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("block length {n} exceeds the brute-force limit of {max}")]
    OracleTooLarge { n: usize, max: usize },

    #[error("search limited to n <= {max}, got {n}")]
    SearchTooLarge { n: usize, max: usize },

    #[error("not a Class-I profile: {0}")]
    NotClassI(String),

    #[error("unsupported column support: {0}")]
    UnsupportedSupport(String),

    #[error("rule {rule} not applicable: {reason}")]
    RuleNotApplicable { rule: &'static str, reason: String },

    #[error("scenario inconsistent with codebook: {0}")]
    InconsistentScenario(String),

    #[error("output {y} satisfies {count} partition predicates")]
    PartitionViolation { y: u64, count: usize },

    #[error("cannot start worker pool: {0}")]
    WorkerPool(String),
}

pub type Result<T> = std::result::Result<T, Error>;
