use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{}:{line}: {message}", path.display())]
    Located { path: PathBuf, line: usize, message: String },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Core(#[from] taylor_core::Error),
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub fn syntax(line: usize, message: impl Into<String>) -> Self {
        Error::Syntax { line, message: message.into() }
    }

    /// Prefixes a syntax error with the file it came from.
    pub fn in_file(self, path: &std::path::Path) -> Self {
        match self {
            Error::Syntax { line, message } => Error::Located { path: path.to_path_buf(), line, message },
            other => other,
        }
    }
}

pub fn read_file(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}
