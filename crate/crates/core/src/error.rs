use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("polynomial has total degree {degree}, expected at most 2")]
    NotQuadratic { degree: u32 },

    #[error("overlapping supports at index {index}")]
    InvalidSuperposition { index: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("construction constraint violated: {0}")]
    Constraint(String),

    #[error("seed function rejected: {0}")]
    InvalidSeed(String),

    #[error("outside the domain of the bound: {0}")]
    Domain(String),

    #[error("malformed file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
