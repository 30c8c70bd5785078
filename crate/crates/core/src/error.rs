use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid cyclic order {0}: every factor must be >= 1")]
    InvalidOrder(i64),

    #[error("shape mismatch: element has {got} coordinates, group has {expected}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("element {0:?} does not belong to the group")]
    NotInGroup(Vec<u32>),

    #[error("operands belong to different groups")]
    GroupMismatch,

    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid block: {0}")]
    InvalidBlock(String),

    #[error("functions are not complementary: {0}")]
    NotComplementary(String),

    #[error("gram precondition failed: {0}")]
    GramPrecondition(String),

    #[error("construction precondition failed: {0}")]
    KindPrecondition(String),

    #[error("search budget exhausted: {0}")]
    BudgetExceeded(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
