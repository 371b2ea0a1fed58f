use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what}: tolerance not met (estimate {value:e}, error {err:e})")]
    ToleranceNotMet {
        what: &'static str,
        value: f64,
        err: f64,
    },

    #[error("{what}: series diverges (terms growing after {terms} terms)")]
    Divergence { what: &'static str, terms: usize },

    #[error("{what}: series not converged within {terms} terms")]
    SeriesNotConverged { what: &'static str, terms: usize },

    #[error("sine transform: integrand envelope is not decaying")]
    NonDecaying,

    #[error("integrand singularity at {0} is stronger than inverse square root")]
    StrongSingularity(f64),

    #[error("classically forbidden: {0}")]
    Forbidden(String),

    #[error("zero argument")]
    ZeroInput,
}

impl Error {
    /// True for failures of a numerical method, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ToleranceNotMet { .. }
                | Error::Divergence { .. }
                | Error::SeriesNotConverged { .. }
                | Error::NonDecaying
                | Error::StrongSingularity(_)
        )
    }
}
