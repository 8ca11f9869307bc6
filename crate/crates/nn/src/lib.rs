//! A small neural-network engine for the equalizer models: dense,
//! 1-D convolutional, and recurrent layers (vanilla, LSTM, GRU, optionally
//! bidirectional) with hand-derived reverse-mode gradients, MSE loss,
//! inverted dropout, Adam, and bit-exact binary checkpoints.
//!
//! Everything runs in f64 and every random draw (init, dropout, shuffle)
//! is seeded, so training is reproducible to the last bit.

pub mod activation;
pub mod adam;
pub mod checkpoint;
pub mod error;
pub mod init;
pub mod layers;
pub mod model;
pub mod tensor;
pub mod train;

pub use activation::Activation;
pub use error::NnError;
pub use model::{Layer, Mode, Model};
pub use tensor::Tensor;
pub use train::{train, TrainConfig, TrainReport};
