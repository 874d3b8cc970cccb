use thiserror::Error;

/// Errors raised by every public operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The model and prior families cannot be combined.
    #[error("unsupported combination: {model} model with {prior} prior")]
    Unsupported { model: String, prior: String },

    /// A configuration entry failed validation.
    #[error("invalid configuration at `{key}`: {reason}")]
    Config { key: String, reason: String },

    /// A root finder, quadrature rule or sampler did not converge.
    #[error("numerical failure in {context}: {detail}")]
    Numerical { context: &'static str, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config { key: key.into(), reason: reason.into() }
    }

    pub(crate) fn numerical(context: &'static str, detail: impl Into<String>) -> Self {
        Error::Numerical { context, detail: detail.into() }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numerical { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
