use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("stage {stage} out of range 1..={max}")]
    Stage { stage: usize, max: usize },
    #[error("index set too large: {0}")]
    Size(String),
    #[error("invalid problem: {0}")]
    Spec(String),
    #[error("invalid parameters: {0}")]
    Parameter(String),
    #[error("unsupported: {0}")]
    Capability(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown format `{0}`")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
