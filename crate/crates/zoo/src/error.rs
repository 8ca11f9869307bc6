use thiserror::Error;

#[derive(Debug, Error)]
pub enum ZooError {
    #[error("unknown architecture '{0}'")]
    UnknownArchitecture(String),

    #[error("invalid architecture: {0}")]
    InvalidArchitecture(String),

    #[error("shape error at layer {layer} ({kind}): {detail}")]
    ShapeError { layer: usize, kind: String, detail: String },

    #[error("architecture does not support unit scaling: {0}")]
    NotScalable(String),

    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, ZooError>;
