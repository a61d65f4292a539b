use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid `{key}`: {reason}")]
    Invalid { key: String, reason: String },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("snapshot: bad magic")]
    BadMagic,
    #[error("snapshot truncated: expected {expected} bytes, found {found}")]
    Truncated { expected: u64, found: u64 },
    #[error("snapshot inconsistent: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Core(#[from] tdgl_core::Error),
}

impl HarnessError {
    pub fn invalid(key: &str, reason: impl Into<String>) -> Self {
        HarnessError::Invalid {
            key: key.to_string(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 divergence, 3 configuration, 4 I/O and file formats.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Core(tdgl_core::Error::Divergence { .. }) => 2,
            HarnessError::Parse { .. } | HarnessError::Invalid { .. } | HarnessError::UnknownPreset(_) => 3,
            HarnessError::Core(_) => 3,
            _ => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
