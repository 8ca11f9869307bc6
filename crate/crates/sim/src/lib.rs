//! Desk-scale laboratory for dual-polarization coherent fiber transmission.
//!
//! The crate covers the full physical path: seeded bit generation and
//! 16-QAM mapping, RRC pulse shaping, laser phase noise, split-step
//! propagation with distributed PMD and EDFA noise, and the coherent
//! receiver chain (resampling, CD compensation, digital backpropagation,
//! RDE MIMO equalization, two-stage carrier phase estimation, matched
//! filtering) down to windowed datasets for neural equalizers and
//! BER / Q-factor metrics.
//!
//! All field samples are double-precision complex baseband. Every random
//! draw goes through a named, seedable stream (see [`rng`]) so a given
//! seed block reproduces bit-identical results.

pub mod channel;
pub mod cpe;
pub mod error;
pub mod metrics;
pub mod mimo;
pub mod rng;
pub mod rxdsp;
pub mod signal;
pub mod spectral;
pub mod tx;
pub mod windows;

pub use error::SimError;
pub use signal::{DualPolWaveform, SymbolFrame, SystemParams};
