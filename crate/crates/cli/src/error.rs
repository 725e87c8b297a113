use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] qnas_core::Error),

    #[error("io error on {path}: {msg}")]
    Io { path: String, msg: String },

    #[error("{0}")]
    Runtime(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn io(path: &std::path::Path, e: impl std::fmt::Display) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        }
    }

    /// Process exit code: 2 for bad input or configuration, 3 for failures
    /// while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(qnas_core::Error::Config(_) | qnas_core::Error::Parse { .. }) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
