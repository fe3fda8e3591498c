use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CurError>;

#[derive(Debug, Error)]
pub enum CurError {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid rank: {0}")]
    InvalidRank(String),

    #[error("invalid partition: cannot split {dim_size} entries into {blocks} non-empty blocks")]
    InvalidPartition { dim_size: usize, blocks: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("relative error undefined: reference matrix has zero Frobenius norm")]
    ZeroMatrix,

    #[error("{what} needs {required} units of work, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        required: u128,
        budget: u128,
    },

    #[error("failed to load {}: {position}: {message}", path.display())]
    Load {
        path: PathBuf,
        position: String,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
