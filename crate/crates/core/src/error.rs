use thiserror::Error;

/// Errors raised across the crate. Every variant carries enough context to
/// replay the failing call.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("index {0} already present")]
    IndexPresent(usize),
    #[error("index {0} not present")]
    IndexMissing(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid chord diagram: {0}")]
    InvalidDiagram(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("support mismatch in row {row}: {detail}")]
    Support { row: usize, detail: String },
    #[error("sign rule {rule} violated at chord {chord}: {detail}")]
    SignRule { rule: u8, chord: usize, detail: String },
    #[error("point is not in the interior of the cell: {0}")]
    NotInCell(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
