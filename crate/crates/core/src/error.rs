use thiserror::Error;

use crate::density::Diagnostics;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("basis mismatch: {0:?} vs {1:?}")]
    BasisMismatch(String, String),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(Diagnostics),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Two algebraically equivalent routes disagreed beyond tolerance.
    #[error("internal consistency check failed for {what}: {lhs} vs {rhs} (|diff| = {diff:e})")]
    Consistency {
        what: &'static str,
        lhs: f64,
        rhs: f64,
        diff: f64,
    },

    #[error("imaginary residue {0:e} in a quantity that must be real")]
    ImaginaryResidue(f64),

    #[error("reference state is not diagonal (off-diagonal mass {0:e})")]
    NonDiagonalReference(f64),

    #[error("truncation failed: {0}")]
    Truncation(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 1,
            Error::Truncation(_) | Error::Quadrature(_) => 3,
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}
