use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    Graph(String),

    #[error("{0}")]
    Validation(String),

    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error("budget exceeded: search space has {size} elements, budget is {budget}")]
    Budget { size: String, budget: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("sampling exhausted after {0} attempts")]
    Exhausted(u64),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Refusals (budget/domain/exhaustion) as opposed to malformed input.
    pub fn is_refusal(&self) -> bool {
        matches!(self, Error::Budget { .. } | Error::Domain(_) | Error::Exhausted(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
