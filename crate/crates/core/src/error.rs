//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The result exists but is not representable as an `f64`.
    #[error("range error: {0}")]
    Range(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("quadrature grid exact to degree {exact} but {required} is required")]
    GridTooSmall { exact: usize, required: usize },

    /// A diagonal operator has an eigenvalue too close to zero to invert.
    #[error("degenerate operator {label} at degree {ell}: |eigenvalue| = {modulus:e}")]
    Degenerate {
        label: String,
        ell: usize,
        modulus: f64,
    },

    #[error("truncation error: {0}")]
    Truncation(String),

    /// Two computations that must agree did not.
    #[error("inconsistent results: {0}")]
    Inconsistent(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
