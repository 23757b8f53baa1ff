use std::io;
use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Core(#[from] fruc_core::Error),

    #[error("malformed stream at byte {offset}: {reason}")]
    Parse { offset: u64, reason: String },

    #[error("stream truncated inside frame {frame}")]
    Truncated { frame: usize },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// Bad command-line values that clap cannot check on its own.
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn parse(offset: u64, reason: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            reason: reason.into(),
        }
    }

    /// Process exit code: 1 for usage errors, 2 for IO and format errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::Core(fruc_core::Error::InvalidConfig(_)) => 1,
            _ => 2,
        }
    }
}
