use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph must be connected")]
    Disconnected,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("good start failed (best estimate {best:.6} < 0.95); recalibrate alpha")]
    GoodStart { best: f64 },
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("linear program is infeasible")]
    LpInfeasible,
    #[error("linear program is unbounded")]
    LpUnbounded,
    #[error("lp solver failure: {0}")]
    LpSolver(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
