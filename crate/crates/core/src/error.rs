use thiserror::Error;

/// Errors raised by constructors, special-function evaluation and verification.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A precondition on parameters or evaluation points was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// No sign change of ψ was found on the scan grid.
    #[error("no sign change found while bracketing: {0}")]
    Bracket(String),

    /// An iterative solver did not reach its tolerance.
    #[error("did not converge: {0}")]
    Convergence(String),

    /// Two flaps of a glued cone solution overlap.
    #[error("overlapping flaps: {0}")]
    Overlap(String),

    /// A least-squares exponent fit was of poor quality.
    #[error("exponent fit rejected: {0}")]
    Fit(String),

    /// The shooting integrator could not continue.
    #[error("integration step failure: {0}")]
    StepFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
