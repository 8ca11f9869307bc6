//! The published layer stacks for both receiver modes, transcribed
//! literally, plus desk-scale counterparts for fast experiments.
//!
//! Default window sizes are quoted as the channel-memory knob m_bar
//! (symbols each side of the center): the window then spans
//! 2*floor(m_bar*sps + (sps-1)/2) + 1 samples. The defaults below were
//! chosen so the per-model input sizes are consistent with the published
//! parameter-count and FLOP tables; they are knobs, not constants.

use crate::arch::{Act, ArchSpec, InputLayout, LayerSpec};
use crate::error::{Result, ZooError};

pub const CATALOG_NAMES: [&str; 7] =
    ["mlp", "cnn_mlp", "bi_lstm", "bi_gru", "bi_rnn", "cnn_bi_lstm", "crnn"];

fn fc(units: usize, activation: Act) -> LayerSpec {
    LayerSpec::Fc { units, activation }
}

fn conv(kernels: usize, l_ker: usize, stride: usize, activation: Act) -> LayerSpec {
    LayerSpec::Conv1d { kernels, l_ker, stride, activation }
}

/// Full-scale architecture table.
pub fn catalog(name: &str, rx_mode: u8) -> Result<ArchSpec> {
    let layers = match (name, rx_mode) {
        ("mlp", 1) => vec![
            LayerSpec::Flatten,
            LayerSpec::Dropout { rate: 0.4 },
            fc(1536, Act::Tanh),
            fc(1536, Act::Tanh),
            LayerSpec::Dropout { rate: 0.3 },
            fc(1536, Act::Tanh),
            fc(1536, Act::Tanh),
        ],
        ("mlp", 2) => vec![
            LayerSpec::Flatten,
            LayerSpec::Dropout { rate: 0.5 },
            fc(1536, Act::Tanh),
            fc(1152, Act::Tanh),
            LayerSpec::Dropout { rate: 0.4 },
            fc(1152, Act::Tanh),
            fc(768, Act::Tanh),
        ],
        ("cnn_mlp", 1) => vec![
            conv(4, 49, 1, Act::Relu),
            conv(6, 49, 1, Act::Relu),
            conv(8, 49, 1, Act::Relu),
            LayerSpec::Flatten,
            fc(768, Act::Tanh),
            fc(768, Act::Tanh),
        ],
        ("cnn_mlp", 2) => vec![
            conv(3, 99, 1, Act::Relu),
            conv(7, 99, 3, Act::Relu),
            conv(20, 51, 3, Act::Relu),
            LayerSpec::Flatten,
            fc(1152, Act::Tanh),
            LayerSpec::Dropout { rate: 0.3 },
            fc(1152, Act::Tanh),
        ],
        ("bi_lstm", 1) => vec![
            LayerSpec::Lstm { units: 144, bidirectional: true, many_to_one: false },
            LayerSpec::Flatten,
        ],
        ("bi_lstm", 2) => vec![
            LayerSpec::Lstm { units: 158, bidirectional: true, many_to_one: false },
            LayerSpec::Flatten,
        ],
        ("bi_gru", 1) => vec![
            LayerSpec::Gru { units: 144, bidirectional: true, many_to_one: false },
            LayerSpec::Flatten,
        ],
        ("bi_gru", 2) => vec![
            LayerSpec::Gru { units: 158, bidirectional: true, many_to_one: false },
            LayerSpec::Flatten,
        ],
        ("bi_rnn", 1) => vec![
            LayerSpec::Rnn {
                units: 240,
                activation: Act::Tanh,
                bidirectional: true,
                many_to_one: false,
            },
            LayerSpec::Flatten,
        ],
        ("bi_rnn", 2) => vec![
            LayerSpec::Rnn {
                units: 270,
                activation: Act::Tanh,
                bidirectional: true,
                many_to_one: false,
            },
            LayerSpec::Flatten,
        ],
        ("cnn_bi_lstm", 1 | 2) => vec![
            conv(2, 49, 1, Act::LeakyRelu),
            LayerSpec::Lstm { units: 136, bidirectional: true, many_to_one: false },
            LayerSpec::Flatten,
        ],
        ("crnn", 1) => vec![
            conv(4, 49, 1, Act::Relu),
            conv(36, 9, 9, Act::Relu),
            conv(180, 5, 5, Act::Relu),
            LayerSpec::Rnn {
                units: 454,
                activation: Act::Tanh,
                bidirectional: false,
                many_to_one: true,
            },
        ],
        ("crnn", 2) => vec![
            conv(4, 99, 1, Act::Relu),
            conv(30, 11, 11, Act::Relu),
            conv(125, 9, 9, Act::Relu),
            LayerSpec::Rnn {
                units: 494,
                activation: Act::Tanh,
                bidirectional: false,
                many_to_one: true,
            },
        ],
        _ => return Err(ZooError::UnknownArchitecture(format!("{name} (rx {rx_mode})"))),
    };
    let spec = ArchSpec { name: name.into(), rx_mode, input: input_layout(name), layers };
    spec.validate()?;
    Ok(spec)
}

fn input_layout(name: &str) -> InputLayout {
    match name {
        // Convolutional fronts read the interleaved 2-channel map; the
        // MLP flattens it, which is layout-independent.
        "mlp" | "cnn_mlp" | "crnn" => InputLayout::Interleaved,
        // Recurrent fronts (and the no-stride conv ahead of one) read
        // per-symbol steps with 4 features.
        _ => InputLayout::Steps,
    }
}

/// Default channel-memory knob (symbols per side) per model at full
/// scale. The recurrent-family values reproduce the published flatten
/// sizes (193 steps for RX 1, 197 for RX 2); the convolutional fronts
/// use the windows that land their FLOP totals on the published values.
pub fn default_mbar(name: &str, rx_mode: u8) -> Result<usize> {
    Ok(match (name, rx_mode) {
        ("mlp" | "cnn_mlp" | "bi_lstm" | "bi_gru" | "bi_rnn", 1) => 96,
        ("cnn_bi_lstm", 1) => 120,
        ("crnn", 1) => 102,
        ("mlp" | "cnn_mlp" | "bi_lstm" | "bi_gru" | "bi_rnn", 2) => 49,
        ("cnn_bi_lstm", 2) => 74,
        ("crnn", 2) => 99,
        _ => return Err(ZooError::UnknownArchitecture(format!("{name} (rx {rx_mode})"))),
    })
}

/// Desk-scale stacks: the same families scaled down to train in minutes
/// on a workstation.
pub fn catalog_desk(name: &str, rx_mode: u8) -> Result<ArchSpec> {
    let layers = match (name, rx_mode) {
        ("mlp", 1 | 2) => vec![
            LayerSpec::Flatten,
            LayerSpec::Dropout { rate: 0.2 },
            fc(256, Act::Tanh),
            fc(256, Act::Tanh),
        ],
        ("cnn_mlp", 1 | 2) => vec![
            conv(4, 9, 1, Act::Relu),
            conv(8, 5, 5, Act::Relu),
            LayerSpec::Flatten,
            fc(128, Act::Tanh),
        ],
        ("bi_lstm", 1 | 2) => vec![
            LayerSpec::Lstm { units: 32, bidirectional: true, many_to_one: false },
            LayerSpec::Flatten,
        ],
        ("bi_gru", 1 | 2) => vec![
            LayerSpec::Gru { units: 32, bidirectional: true, many_to_one: false },
            LayerSpec::Flatten,
        ],
        ("bi_rnn", 1 | 2) => vec![
            LayerSpec::Rnn {
                units: 48,
                activation: Act::Tanh,
                bidirectional: true,
                many_to_one: false,
            },
            LayerSpec::Flatten,
        ],
        ("cnn_bi_lstm", 1 | 2) => vec![
            conv(2, 9, 1, Act::LeakyRelu),
            LayerSpec::Lstm { units: 32, bidirectional: true, many_to_one: false },
            LayerSpec::Flatten,
        ],
        ("crnn", 1) => vec![
            conv(4, 9, 1, Act::Relu),
            conv(16, 5, 5, Act::Relu),
            conv(48, 3, 3, Act::Relu),
            LayerSpec::Rnn {
                units: 64,
                activation: Act::Tanh,
                bidirectional: false,
                many_to_one: true,
            },
        ],
        ("crnn", 2) => vec![
            conv(4, 19, 1, Act::Relu),
            conv(16, 8, 8, Act::Relu),
            conv(48, 4, 4, Act::Relu),
            LayerSpec::Rnn {
                units: 96,
                activation: Act::Tanh,
                bidirectional: false,
                many_to_one: true,
            },
        ],
        _ => return Err(ZooError::UnknownArchitecture(format!("{name} (rx {rx_mode})"))),
    };
    let spec =
        ArchSpec { name: format!("{name}_desk"), rx_mode, input: input_layout(name), layers };
    spec.validate()?;
    Ok(spec)
}

/// Desk-scale default windows.
pub fn default_mbar_desk(name: &str, rx_mode: u8) -> Result<usize> {
    if !CATALOG_NAMES.contains(&name) || !(rx_mode == 1 || rx_mode == 2) {
        return Err(ZooError::UnknownArchitecture(format!("{name} (rx {rx_mode})")));
    }
    Ok(match (name, rx_mode) {
        ("crnn", 1) => 16,
        ("cnn_bi_lstm", 1) => 20,
        ("crnn", 2) => 24,
        ("cnn_bi_lstm", 2) => 16,
        (_, 1) => 16,
        _ => 12,
    })
}
