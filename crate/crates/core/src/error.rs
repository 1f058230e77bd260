use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input that does not describe a rooted tree.
    #[error("malformed tree: {0}")]
    Malformed(String),
    /// Argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Requested size is above the configured cap for this kind of work.
    #[error("size {n} exceeds the {what} cap of {cap}")]
    ResourceLimit {
        what: &'static str,
        n: usize,
        cap: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
