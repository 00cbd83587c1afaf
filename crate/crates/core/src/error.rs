use thiserror::Error;

/// Errors produced by the library.
///
/// Variants are split along the lines the CLI cares about: `Parse` is a
/// malformed input, everything else is a domain error.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{}", level_message(*alpha, *d))]
    LevelOutOfRange { alpha: f64, d: usize },

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("the zero vector has no Schmidt decomposition")]
    ZeroVector,

    #[error("vector norm {norm} deviates from 1 by more than {tol}")]
    NotUnit { norm: f64, tol: f64 },

    #[error("the zero matrix has no Ky-Fan ratio")]
    ZeroMatrix,

    #[error("{0}")]
    Domain(String),

    #[error("eigenvalue {eigenvalue} below -{tol}: operator is not positive semidefinite")]
    NotPositive { eigenvalue: f64, tol: f64 },

    #[error("internal verification failed: {0}")]
    Verification(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

fn level_message(alpha: f64, d: usize) -> String {
    if alpha < 1.0 {
        format!("alpha below 1: {alpha}")
    } else if alpha > d as f64 {
        format!("alpha above d = {d}: {alpha}")
    } else {
        format!("alpha {alpha} is not a finite level in [1, {d}]")
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
