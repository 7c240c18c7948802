use thiserror::Error;

use crate::field::Field;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),

    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("relation is not admissible: {0}")]
    NotAdmissible(String),

    #[error("monomial of length {length} exceeds the degree bound {bound}")]
    DegreeOverflow { length: usize, bound: usize },

    #[error("rewrite system is certified confluent only up to degree {certified}, not {requested}")]
    NotConfluent { requested: usize, certified: usize },

    #[error("completion aborted: {0}")]
    CompletionLimit(String),

    #[error("relations are not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("algebra is not finite-dimensional up to degree {0}")]
    NotFiniteDimensional(usize),

    #[error("not a monomial presentation: {0}")]
    NotMonomial(String),

    #[error("not a quadratic presentation: {0}")]
    NotQuadratic(String),

    #[error("resource budget exceeded: {0}")]
    Budget(String),

    #[error("{0}")]
    Unsupported(String),
}
