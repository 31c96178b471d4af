use std::path::PathBuf;

use thiserror::Error;

use crate::grid::Space;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("space mismatch: expected {expected:?}, found {found:?}")]
    SpaceMismatch { expected: Space, found: Space },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    /// The Fredholm operator is (numerically) not invertible: the solution
    /// has left the coordinate patch on which the Riccati relation is solvable.
    #[error("near-singular Fredholm operator (|det2| = {det2_abs:.3e}, cond ~ {condition:.3e})")]
    NearSingular { det2_abs: f64, condition: f64 },

    #[error("pole encountered at t = {t}: |q| = {modulus:.3e}")]
    PoleEncountered { t: f64, modulus: f64 },

    #[error("blow-up detected at t = {t}: sup-norm {sup:.3e}")]
    BlowUp { t: f64, sup: f64 },

    #[error("exponential overflow: symbol growth {growth:.3e} at t = {t}")]
    Overflow { t: f64, growth: f64 },

    #[error("eigenvalue computation failed: {0}")]
    Eigen(String),

    #[error("invalid stepper configuration: {0}")]
    InvalidStepper(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of the numerics themselves (as opposed to bad
    /// input or I/O).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NearSingular { .. }
                | Error::PoleEncountered { .. }
                | Error::BlowUp { .. }
                | Error::Overflow { .. }
                | Error::Eigen(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
