use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical routines and the harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument is outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Refinement stopped before two successive estimates agreed.
    #[error("quadrature did not converge: last estimate {last}, previous estimate {previous}")]
    NotConverged {
        last: Complex64,
        previous: Complex64,
    },

    /// The integral (or a quasi-norm) grows without bound under refinement.
    #[error("divergent integral: {0}")]
    Divergent(String),

    /// A field/exponent combination fails the Hardy-space membership rule.
    #[error("not admitted: {0}")]
    NotAdmitted(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
