use thiserror::Error;

/// Errors surfaced by tiling construction and analysis.
#[derive(Debug, Error)]
pub enum Error {
    /// Integer overflow in exact arithmetic. Never wrapped silently.
    #[error("integer overflow in {context}")]
    Overflow { context: &'static str },

    /// A point set or tiling violates a structural invariant.
    #[error("structural fault: {0}")]
    Structural(String),

    /// Validation failure with the first counterexample found.
    #[error("validation failed: {0}")]
    Validation(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("bad input: {0}")]
    BadInput(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
