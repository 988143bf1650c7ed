use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("only the zero form is invariant")]
    EmptySolution,
    #[error("degenerate form: rank {rank} < dimension {dim}")]
    DegenerateForm { rank: usize, dim: usize },
    #[error("character tuple has a zero entry")]
    ZeroCharacter,
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("radical quotient has dimension {got}, expected {expected}")]
    RadicalDimensionUnexpected { got: usize, expected: usize },
    #[error("word budget of {0} exhausted before the search stabilized")]
    BudgetExceeded(usize),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
