use thiserror::Error;

/// Errors raised by the core operations.
///
/// Failed identity checks are never errors; they are recorded in a
/// [`Report`](crate::report::Report) or returned as an
/// [`InfeasibilityCertificate`](crate::classify::InfeasibilityCertificate).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("central element C:{index} does not exist in case {case}")]
    InvalidCentralIndex { index: u8, case: String },

    #[error("index {index} lies outside the window [-{window}, {window}]")]
    OutsideWindow { index: i64, window: i64 },

    #[error("invalid module specification: {0}")]
    InvalidSpec(String),

    #[error("cannot compare modules: {0}")]
    Incomparable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        Error::Syntax { pos, msg: msg.into() }
    }
}
