use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("{what} exceeds cap: {actual} > {limit}")]
    CapExceeded {
        what: &'static str,
        limit: u128,
        actual: u128,
    },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("malformed instance: {0}")]
    MalformedInstance(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_cap(what: &'static str, actual: u128, limit: u128) -> Result<()> {
    if actual > limit {
        Err(Error::CapExceeded {
            what,
            limit,
            actual,
        })
    } else {
        Ok(())
    }
}
