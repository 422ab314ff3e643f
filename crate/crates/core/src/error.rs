use crate::Complex;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole at {at}")]
    Pole { at: Complex },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular denominator near {at}")]
    SingularDenominator { at: Complex },

    #[error("beta must be nonzero")]
    ZeroBeta,

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("x = {x} is too close to the cut {cut}")]
    CutProximity { x: Complex, cut: &'static str },

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("matrix is not Hermitian (asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("spectrum is not positive (min eigenvalue {min:e})")]
    NonPositiveSpectrum { min: f64 },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence(_) => 3,
            Error::Io(_) | Error::Parse(_) => 4,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
