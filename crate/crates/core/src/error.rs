use thiserror::Error;

/// Error type shared by all modules of the workbench.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input data (dimension mismatches, invalid
    /// structure constants, a map that is not an involution, ...).
    #[error("input error: {0}")]
    Input(String),

    /// A propagator was evaluated too close to one of its singularities.
    #[error("singular evaluation: {0}")]
    Singular(String),

    /// A combinatorial enumeration would exceed its configured budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// A truncated series operation would need terms beyond its order.
    #[error("truncation too small: {0}")]
    Truncation(String),

    /// Operator/graph arity does not match the supplied inputs.
    #[error("arity mismatch: {0}")]
    Arity(String),

    /// A Monte-Carlo weight required by an operator assembly is missing.
    #[error("missing weight: {0}")]
    MissingWeight(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
