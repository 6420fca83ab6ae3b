use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: emlab_core::Error,
    },
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl CliError {
    /// Exit status: 2 usage, 3 resource or resolution, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        use emlab_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core { source, .. } => match source {
                E::InvalidArgument(_) => 2,
                E::Resolution { .. } | E::ResourceLimit(_) | E::Convergence { .. } => 3,
                _ => 1,
            },
            CliError::Io { .. } | CliError::Csv { .. } => 3,
        }
    }
}

pub(crate) trait Context<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T, CliError>;
}

impl<T> Context<T> for emlab_core::Result<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T, CliError> {
        self.map_err(|source| CliError::Core {
            context: what(),
            source,
        })
    }
}
