use thiserror::Error;

use crate::quadrature::QuadratureResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Green functions are singular at zero separation.
    #[error("singular evaluation: separation must be nonzero")]
    Singular,

    #[error("wrong formula tier: {0}")]
    WrongTier(String),

    #[error("quadrature did not converge: value {:e} with error estimate {:e} after {} evaluations", .partial.value, .partial.abs_error_estimate, .partial.evaluations)]
    NonConvergence { partial: QuadratureResult },

    #[error("not found: {0}")]
    NotFound(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
