use thiserror::Error;

/// Errors raised by the algebra, combinatorics and holonomic layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable lists differ: {left:?} vs {right:?}")]
    VarMismatch { left: Vec<String>, right: Vec<String> },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("truncation error: {0}")]
    Truncation(String),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("not encodable: {0}")]
    NotEncodable(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("iteration did not converge: {0}")]
    NonConvergence(String),
    #[error("elimination degenerate at step {step}: {msg}")]
    Degenerate { step: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
