use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The generator has a degenerate spectrum, so no finite bound exists.
    #[error("unbounded sensitivity: generator spectrum is degenerate (Λ = λ = {0})")]
    DegenerateSpectrum(f64),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("sensitivity undefined: {0}")]
    UndefinedSensitivity(String),

    #[error("no convergence after {steps} steps (residual {residual:.3e})")]
    NonConvergence { steps: usize, residual: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("numerical instability: {0}")]
    Instability(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
