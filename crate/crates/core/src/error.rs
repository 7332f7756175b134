use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },

    #[error("division by zero: {numerator} / 0")]
    DivisionByZero { numerator: String },

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("field {0} is infinite and not enumerable")]
    NotEnumerable(String),

    #[error("square-class degree undefined in odd characteristic {0}")]
    OddCharacteristic(u32),

    #[error("polynomial degree {degree} exceeds cap {cap}")]
    DegreeOverflow { degree: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degenerate quadratic form: singular radical of dimension {radical_dim}")]
    Degenerate { radical_dim: usize },

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("point budget exceeded: more than {budget} points")]
    BudgetExceeded { budget: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("trials disagree on {what}: {values:?}")]
    TrialDisagreement { what: String, values: Vec<usize> },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
