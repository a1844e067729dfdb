use std::io;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Codec(#[from] irbr_core::Error),
    #[error("not an IRBR container (bad magic)")]
    BadMagic,
    #[error("unsupported container version {0}")]
    BadVersion(u8),
    #[error("container truncated")]
    Truncated,
    #[error("corrupt container: {0}")]
    Corrupt(String),
    #[error("invalid PGM: {0}")]
    Pgm(&'static str),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> Error {
        let path = path.into();
        move |source| Error::Io { path, source }
    }

    /// Process exit status: 3 for damaged containers, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BadMagic | Error::BadVersion(_) | Error::Truncated | Error::Corrupt(_) => 3,
            _ => 2,
        }
    }
}
