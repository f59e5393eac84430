use thiserror::Error;

/// Errors surfaced by index construction, queries and the bundle format.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("level {0} was not retained; rebuild with retained levels")]
    LevelNotRetained(usize),

    #[error("malformed bundle (section {section}): {reason}")]
    Format { section: u64, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn format(section: u64, reason: impl Into<String>) -> Self {
        Error::Format {
            section,
            reason: reason.into(),
        }
    }
}
