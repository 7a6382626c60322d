use thiserror::Error;

/// Errors produced by the library.
///
/// [`Error::Consistency`] is reserved for internal cross-checks that failed
/// (two exact routes disagreeing, a proven bound being violated); every other
/// variant is a rejected input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("pattern too large: {0}")]
    PatternTooLarge(String),

    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_consistency(&self) -> bool {
        matches!(self, Error::Consistency(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
