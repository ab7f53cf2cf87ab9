use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] cavity_zeno::Error),
    #[error("self-test failed: {0}")]
    Selftest(String),
    #[error("sweep point {parameter}={value} failed: {source}")]
    SweepPoint {
        parameter: String,
        value: f64,
        #[source]
        source: Box<CliError>,
    },
    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

impl CliError {
    /// 2 config, 3 numerical, 4 I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) | CliError::Selftest(_) => 3,
            CliError::SweepPoint { source, .. } => source.exit_code(),
            CliError::Io { .. } => 4,
        }
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}
