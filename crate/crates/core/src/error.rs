use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("expected a {expected}-channel image, got {actual} channels")]
    ChannelCount { expected: usize, actual: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },

    #[error("invalid filter parameters: {0}")]
    InvalidParams(String),

    #[error("window of side {side} does not fit a {width}x{height} image")]
    WindowTooLarge {
        side: usize,
        width: usize,
        height: usize,
    },

    #[error("invalid scale factor: {0}")]
    InvalidScale(String),

    #[error("no built-in radius for scale {scale} ({upscaler})")]
    UnsupportedScale { scale: String, upscaler: String },

    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },

    #[error("{path}: unsupported image format: {message}")]
    UnsupportedFormat { path: PathBuf, message: String },

    #[error("manifest {path}: {message}")]
    Manifest { path: PathBuf, message: String },

    #[error("scene '{scene}': {message}")]
    Scene { scene: String, message: String },

    #[error("{0}")]
    Report(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, err: impl std::fmt::Display) -> Self {
        Error::Io {
            path: path.into(),
            message: err.to_string(),
        }
    }

    pub(crate) fn scene(scene: &str, err: impl std::fmt::Display) -> Self {
        Error::Scene {
            scene: scene.to_string(),
            message: err.to_string(),
        }
    }
}
