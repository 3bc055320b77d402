use thiserror::Error;

/// Errors raised by the solver pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("root finding failed: {0}")]
    RootFinding(String),

    /// The rational function has a polynomial part, i.e. its inverse
    /// transform contains impulses that a `Signal` cannot carry.
    #[error("rational function is not strictly proper (impulsive inverse transform)")]
    NotStrictlyProper,

    /// The observability matrix is singular at the configured threshold, so
    /// no unique state matches the output stack.
    #[error("state space representation is not observable (sigma_min/sigma_max = {ratio:e})")]
    NotObservable { ratio: f64 },

    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("signal modes are not closed under complex conjugation")]
    NotConjugateClosed,

    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(what: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Dimension {
            what,
            expected,
            got,
        })
    }
}
