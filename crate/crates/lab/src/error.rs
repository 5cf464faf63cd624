use thiserror::Error;

/// Errors surfaced by the laboratory front end.
#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] riesz_core::Error),

    #[error("{0}")]
    Invalid(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed config: {0}")]
    Config(#[from] toml::de::Error),
}

impl LabError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Self::Invalid(msg.into())
    }

    /// Process exit code: 3 for iterative failures, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Core(e) if e.is_nonconvergence() => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
