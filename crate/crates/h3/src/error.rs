use std::path::PathBuf;

/// Failures outside the checkers themselves.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("CONFIG_INVALID: {0}")]
    ConfigInvalid(String),
    #[error("IO_ERROR: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}: line {line}: {msg}")]
    Format { origin: String, line: usize, msg: String },
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: h3_core::Error,
    },
}

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.into(), source }
    }

    pub fn core(context: impl Into<String>, source: h3_core::Error) -> Self {
        HarnessError::Core {
            context: context.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
