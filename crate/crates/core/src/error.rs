use thiserror::Error;

/// Failure modes shared by every layer of the solver.
///
/// A wrong verdict is never reported through this type: anything the
/// solver cannot decide soundly surfaces as one of these variants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A caller broke an operation's precondition.
    #[error("usage error: {0}")]
    Usage(String),
    /// Malformed or inconsistent input (files, tables, relations).
    #[error("input error: {0}")]
    Input(String),
    /// A configured budget was exhausted before an answer was found.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// An internal consistency check failed.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! usage {
    ($($arg:tt)*) => { $crate::error::Error::Usage(format!($($arg)*)) };
}
macro_rules! invariant {
    ($($arg:tt)*) => { $crate::error::Error::Invariant(format!($($arg)*)) };
}
pub(crate) use invariant;
pub(crate) use usage;

macro_rules! resource {
    ($($arg:tt)*) => { $crate::error::Error::Resource(format!($($arg)*)) };
}
macro_rules! input {
    ($($arg:tt)*) => { $crate::error::Error::Input(format!($($arg)*)) };
}
pub(crate) use input;
pub(crate) use resource;
