use thiserror::Error;

/// Errors raised by the simulator and receiver DSP.
#[derive(Debug, Error)]
pub enum SimError {
    #[error("empty waveform")]
    EmptyWaveform,

    #[error("waveform polarizations differ in length: x={x}, y={y}")]
    PolarizationLengthMismatch { x: usize, y: usize },

    #[error("sequence lengths differ: {a} vs {b}")]
    LengthMismatch { a: usize, b: usize },

    #[error("bit count {0} is not divisible by 4")]
    BitCountNotMod4(usize),

    #[error("waveform has zero power")]
    ZeroPower,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("equalizer diverged: output power {output_power:.3e} exceeds 10x input power {input_power:.3e}")]
    EqualizerDiverged { output_power: f64, input_power: f64 },

    #[error("BER {0} is outside (0, 0.5); Q-factor undefined")]
    QFactorUndefined(f64),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("bad file format: {0}")]
    BadFormat(String),
}

pub type Result<T> = std::result::Result<T, SimError>;
