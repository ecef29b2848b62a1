use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("decomposition failed: {0}")]
    Decomposition(String),
    #[error("Maurer-Cartan solve failed at order {order}, monomial {monomial}: {reason}")]
    MaurerCartan {
        order: usize,
        monomial: String,
        reason: String,
    },
    #[error("{stage}: {reason}")]
    Pipeline { stage: String, reason: String },
    #[error("unknown {kind} {name:?}; available: {available}")]
    Unknown {
        kind: &'static str,
        name: String,
        available: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
