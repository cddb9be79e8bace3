use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A node-count or wall-clock limit was hit before the computation finished.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("unknown node id {0}")]
    UnknownNode(usize),

    #[error("graph contains a cycle")]
    Cyclic,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("malformed json: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded(_))
    }
}
