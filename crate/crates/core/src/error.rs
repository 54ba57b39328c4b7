use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} labels vs {right} labels")]
    Dimension { left: usize, right: usize },

    #[error("invalid ranking: {0}")]
    InvalidRanking(String),

    /// The coefficient requires a different kind of order (strict, total).
    #[error("invalid order: {0}")]
    InvalidOrder(String),

    #[error("coefficient undefined: {0}")]
    UndefinedCoefficient(String),

    #[error("preference cycle between {0} and {1}")]
    Cycle(String, String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("confidence undefined: antecedent has zero support")]
    UndefinedConfidence,

    #[error("lift undefined: zero support in denominator")]
    UndefinedLift,

    #[error("fisher test undefined: empty contingency table")]
    UndefinedTest,

    #[error("unsupported target at instance {row}: {reason}")]
    UnsupportedTarget { row: usize, reason: String },

    /// Row numbers are 1-based data rows (the header is row 0).
    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("model mismatch: {0}")]
    ModelMismatch(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
