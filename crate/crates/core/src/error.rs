use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {field}: {reason}")]
    InvalidInstance { field: String, reason: String },

    #[error("invalid solution: {0}")]
    InvalidSolution(String),

    #[error("test {0} has already been applied")]
    DuplicateTest(usize),

    #[error("test index {index} out of range (instance has {count} tests)")]
    TestOutOfRange { index: usize, count: usize },

    #[error("instance is infeasible: {0}")]
    Infeasible(String),

    #[error("selection is not an r-test set")]
    NotRTestSet,

    #[error("#_B must be at least 1")]
    ZeroHashB,

    #[error("degenerate optimum: m* = {m_star} <= (r+1)/r for r = {r}")]
    Degenerate { m_star: usize, r: u32 },

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
