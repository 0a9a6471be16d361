use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the core library.
///
/// The variants map onto the failure classes of the command line front end:
/// parameter and input errors are usage errors, the rest are numerical.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A model or algorithm parameter is outside its admissible range.
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    Parameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    /// The data handed to an operation does not satisfy its precondition.
    #[error("invalid input: {0}")]
    Input(String),
    /// β = 1 makes the M-Wright law a point mass at 1, which has no density.
    #[error("M-Wright law is degenerate at beta = 1 (point mass at 1)")]
    Degenerate,
    /// The requested size exceeds what the method supports.
    #[error("capacity exceeded: {what} ({requested} > {limit})")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },
    /// A series or quadrature did not reach the requested accuracy.
    #[error("accuracy not reached: {0}")]
    Accuracy(String),
    /// Factorization or spectral failure in a sampler.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// An estimator has no well-defined value for the data.
    #[error("estimation failed: {0}")]
    Estimation(String),
    /// The two candidates cannot be told apart by the variation rule.
    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Parameter { name, value, reason }
    }

    /// True for errors caused by the caller's configuration rather than
    /// by numerics.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Parameter { .. }
                | Error::Input(_)
                | Error::Degenerate
                | Error::Capacity { .. }
                | Error::Precondition(_)
        )
    }
}
