use thiserror::Error;

/// Errors raised across the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("series did not converge: {0}")]
    NonConvergent(String),
    #[error("evaluation strategies disagree: {0}")]
    StrategyDisagreement(String),
    #[error("inversion methods disagree: {0}")]
    InversionDisagreement(String),
    #[error("contour overflow: {0}")]
    ContourOverflow(String),
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
    #[error("kernel series truncated: {0}")]
    TruncationWarning(String),
    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("empty dataset")]
    EmptyDataset,
    #[error("fit did not converge: {0}")]
    NonConvergence(String),
    #[error("degenerate Jacobian: {0}")]
    DegenerateJacobian(String),
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
