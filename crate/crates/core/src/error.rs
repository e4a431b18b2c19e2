use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("set is finite, it has no increasing enumeration")]
    FiniteSet,
    #[error("combination is not natural-valued: {0}")]
    NotNatValued(String),
    #[error("combination is not integer-valued: {0}")]
    NotIntegerValued(String),
    #[error("invalid set: {0}")]
    InvalidSet(String),
    #[error("invalid function: {0}")]
    InvalidFunction(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("formula has {0} free variables, expected at most one")]
    TooManyVariables(usize),
    #[error("unsupported ultrafilter handle for this operation: {0}")]
    UnsupportedHandle(String),
    #[error("invalid universe: {0}")]
    InvalidUniverse(String),
}

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
