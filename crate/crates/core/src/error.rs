use thiserror::Error;

/// Default cap on the size of any intermediate set.
pub const DEFAULT_BOUND: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid structure: {0}")]
    Invalid(String),

    #[error("diagram is not functorial: {0}")]
    NotFunctorial(String),

    #[error("not a natural transformation: {0}")]
    NotNatural(String),

    #[error("element {element} is not in {context}")]
    UnknownElement { element: String, context: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resource bound exceeded while building {what}: {size} elements (bound {bound})")]
    ResourceBound {
        what: String,
        size: usize,
        bound: usize,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_bound(what: impl FnOnce() -> String, size: usize, bound: usize) -> Result<()> {
    if size > bound {
        return Err(Error::ResourceBound {
            what: what(),
            size,
            bound,
        });
    }
    Ok(())
}
