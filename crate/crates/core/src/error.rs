use thiserror::Error;

/// Errors raised by the toolkit.
///
/// The variants follow the failure classes of the harness: caller misuse,
/// mathematical domain violations, numerical resolution problems and
/// configuration/IO failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("quadrature did not converge after {n_t} samples (last {last}, previous {previous})")]
    Convergence { n_t: usize, last: f64, previous: f64 },

    #[error("blow-up guard: sup |u| = {sup_norm} exceeds {ceiling} at t = {t}")]
    BlowUp { t: f64, sup_norm: f64, ceiling: f64 },

    #[error("degenerate strip center: the cube center is the origin")]
    DegenerateCenter,

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("data error: {0}")]
    Data(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
