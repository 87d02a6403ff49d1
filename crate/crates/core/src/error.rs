use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("perturbation parameter a = {a:e} is below the lower bound {bound:e}")]
    Domain { a: f64, bound: f64 },

    #[error("empty data: {0}")]
    EmptyData(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("undefined measure: {0}")]
    UndefinedMeasure(String),

    #[error("i/o error on {path}: {msg}")]
    Io { path: String, msg: String },
}
