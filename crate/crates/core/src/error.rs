use alloc::string::String;

/// Errors raised by the core algorithms.
///
/// Variants are grouped by how a front end should react: `Validation` and
/// `Precondition` are caller mistakes, `Resource` and `Precision` mean the
/// computation was refused or ran out of room.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("graph is disconnected: {0}")]
    Disconnected(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("sequence not stabilized: {0}")]
    NotStabilized(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! bail {
    ($variant:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$variant(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;
