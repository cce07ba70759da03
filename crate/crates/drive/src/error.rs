use std::path::PathBuf;

use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum DriveError {
    #[error(transparent)]
    Core(#[from] sdc_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Toml {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },
    #[error("invalid run configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, DriveError>;

/// Machine-readable form of an error, printed by the CLI on failure.
#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub error: &'static str,
    pub message: String,
}

impl DriveError {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> DriveError {
        let path = path.into();
        move |source| DriveError::Io { path, source }
    }

    pub fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> DriveError {
        DriveError::Format {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            DriveError::Core(_) => "invalid_input",
            DriveError::Io { .. } => "io",
            DriveError::Format { .. } => "format",
            DriveError::Toml { .. } => "toml",
            DriveError::Json { .. } => "json",
            DriveError::Image { .. } => "image",
            DriveError::Config(_) => "config",
        }
    }

    pub fn record(&self) -> ErrorRecord {
        ErrorRecord {
            error: self.kind(),
            message: self.to_string(),
        }
    }
}
