use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot compose: codomain {left} does not match domain {right}")]
    Composition { left: String, right: String },

    #[error("boundary mismatch: {0}")]
    Boundary(String),

    #[error("element `{element}` is not in {carrier}")]
    UnknownElement { element: String, carrier: String },

    #[error("invalid finite set: {0}")]
    InvalidSet(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("type error in `{term}`: {reason}")]
    Type { term: String, reason: String },

    #[error("size cap exceeded: {what} would have {size} elements (cap {cap})")]
    CapExceeded {
        what: String,
        size: u128,
        cap: usize,
    },

    #[error("not an arrow of the exact completion: {0}")]
    NotExArrow(String),

    #[error("cross-check disagreement: {0}")]
    Disagreement(String),

    #[error("construction failed: {0}")]
    Construction(String),
}
