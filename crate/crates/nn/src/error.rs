use thiserror::Error;

#[derive(Debug, Error)]
pub enum NnError {
    #[error("shape mismatch at layer {layer}: {detail}")]
    ShapeMismatch { layer: usize, detail: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("training loss became NaN at epoch {epoch}")]
    NanLoss { epoch: usize },

    #[error("dataset too small: {0}")]
    DatasetTooSmall(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("bad checkpoint: {0}")]
    BadCheckpoint(String),
}

pub type Result<T> = std::result::Result<T, NnError>;
