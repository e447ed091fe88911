use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A numeric input is outside its admissible domain.
    #[error("invalid value for `{field}`: {reason}")]
    InvalidInput { field: String, reason: String },

    /// A categorical distribution (or region blend) does not sum to one.
    #[error("distribution `{field}` sums to {sum}, expected 1")]
    Distribution { field: String, sum: f64 },

    #[error("unknown capacity `{0}`")]
    UnknownCapacity(String),

    #[error("unknown region `{0}`")]
    UnknownRegion(String),

    #[error("no grid factors for region {0}")]
    MissingRegion(String),

    #[error("chip does not fit the wafer: {reason}")]
    ChipTooLarge { reason: String },

    /// The die-per-wafer estimate is not positive; `estimate` is the raw formula value.
    #[error("no usable die on the wafer (estimate {estimate:.3})")]
    NoUsableDie { estimate: f64 },

    #[error("residual power after vCPU share is not positive ({residual} W)")]
    NonPositiveResidual { residual: f64 },

    /// The root finder could not reach the requested target inside its bracket.
    #[error("target unreachable: {reason}")]
    Unreachable { reason: String },

    #[error("unsupported use case for this operation: {0}")]
    UnsupportedUseCase(String),

    #[error("empty sweep: no parameter values")]
    EmptySweep,

    /// Schema or unit problem in an input document.
    #[error("{file}: {path}: {message}")]
    Validation {
        file: String,
        path: String,
        message: String,
    },

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn validation(
        file: impl Into<String>,
        path: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Error::Validation {
            file: file.into(),
            path: path.into(),
            message: message.into(),
        }
    }
}
