//! Transmitter: seeded bit streams, Gray-coded 16-QAM, RRC pulse shaping,
//! laser phase noise, and launch-power scaling.

use num_complex::Complex64;
use rand::{Rng, RngCore};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Result, SimError};
use crate::signal::{dbm_to_watts, measure_power, DualPolWaveform};

/// 1/sqrt(10): scales the {-3,-1,1,3} grid to unit average symbol energy.
const QAM16_SCALE: f64 = 0.31622776601683794;

/// Gray code per 2-bit group, index = (b0 << 1) | b1.
/// 00 -> -3, 01 -> -1, 11 -> +1, 10 -> +3.
const GRAY_LEVELS: [f64; 4] = [-3.0, -1.0, 3.0, 1.0];

/// Deterministic pseudo-random bits; the same seed yields the same stream.
pub fn generate_bits(rng: &mut ChaCha8Rng, n: usize) -> Vec<u8> {
    let mut bits = Vec::with_capacity(n);
    while bits.len() < n {
        let mut word = rng.next_u64();
        for _ in 0..64 {
            if bits.len() == n {
                break;
            }
            bits.push((word & 1) as u8);
            word >>= 1;
        }
    }
    bits
}

/// Maps bit groups of 4 onto the unit-energy 16-QAM grid.
///
/// The first two bits pick the I level and the last two the Q level
/// through the fixed Gray table.
pub fn map_16qam(bits: &[u8]) -> Result<Vec<Complex64>> {
    if bits.len() % 4 != 0 {
        return Err(SimError::BitCountNotMod4(bits.len()));
    }
    Ok(bits
        .chunks_exact(4)
        .map(|b| {
            let i = GRAY_LEVELS[((b[0] << 1) | b[1]) as usize];
            let q = GRAY_LEVELS[((b[2] << 1) | b[3]) as usize];
            Complex64::new(i * QAM16_SCALE, q * QAM16_SCALE)
        })
        .collect())
}

fn nearest_level(v: f64) -> f64 {
    // Decision thresholds at -2, 0, +2 (scaled); ties resolve toward the
    // lower level.
    let t = 2.0 * QAM16_SCALE;
    if v <= -t {
        -3.0
    } else if v <= 0.0 {
        -1.0
    } else if v <= t {
        1.0
    } else {
        3.0
    }
}

fn level_to_bits(level: f64) -> [u8; 2] {
    match level as i64 {
        -3 => [0, 0],
        -1 => [0, 1],
        1 => [1, 1],
        3 => [1, 0],
        _ => unreachable!("levels come from nearest_level"),
    }
}

/// Nearest unit-energy 16-QAM constellation point.
pub fn decide_16qam(s: Complex64) -> Complex64 {
    Complex64::new(nearest_level(s.re) * QAM16_SCALE, nearest_level(s.im) * QAM16_SCALE)
}

/// Hard nearest-point 16-QAM decision, inverse of [`map_16qam`].
pub fn demap_16qam_hard(symbols: &[Complex64]) -> Vec<u8> {
    let mut bits = Vec::with_capacity(symbols.len() * 4);
    for s in symbols {
        let bi = level_to_bits(nearest_level(s.re));
        let bq = level_to_bits(nearest_level(s.im));
        bits.extend_from_slice(&bi);
        bits.extend_from_slice(&bq);
    }
    bits
}

/// Root-raised-cosine filter taps at a given oversampling rate.
///
/// Taps are symmetric and normalized to unit energy, so a TX/RX matched
/// pair has unit gain at the symbol instants.
#[derive(Debug, Clone, PartialEq)]
pub struct RrcFilter {
    pub rolloff: f64,
    pub span_symbols: usize,
    pub sps: usize,
    pub taps: Vec<f64>,
}

impl RrcFilter {
    pub fn new(rolloff: f64, span_symbols: usize, sps: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&rolloff) {
            return Err(SimError::InvalidParameter(format!("rolloff {rolloff} outside [0,1]")));
        }
        if span_symbols == 0 || sps == 0 {
            return Err(SimError::InvalidParameter("span and sps must be positive".into()));
        }
        let half = (span_symbols * sps) / 2;
        let b = rolloff;
        let mut taps: Vec<f64> = (0..=2 * half)
            .map(|k| {
                let t = (k as f64 - half as f64) / sps as f64; // time in symbols
                rrc_impulse(t, b)
            })
            .collect();
        let energy: f64 = taps.iter().map(|v| v * v).sum();
        let norm = energy.sqrt();
        for v in &mut taps {
            *v /= norm;
        }
        Ok(Self { rolloff, span_symbols, sps, taps })
    }

    /// Delay of the filter peak, in samples.
    pub fn group_delay(&self) -> usize {
        (self.taps.len() - 1) / 2
    }
}

fn rrc_impulse(t: f64, b: f64) -> f64 {
    use std::f64::consts::PI;
    if t.abs() < 1e-9 {
        return 1.0 - b + 4.0 * b / PI;
    }
    if b > 0.0 {
        let singular = 1.0 / (4.0 * b);
        if (t.abs() - singular).abs() < 1e-9 {
            let a = (PI / (4.0 * b)).sin() * (1.0 + 2.0 / PI);
            let c = (PI / (4.0 * b)).cos() * (1.0 - 2.0 / PI);
            return b / std::f64::consts::SQRT_2 * (a + c);
        }
    }
    let num = (PI * t * (1.0 - b)).sin() + 4.0 * b * t * (PI * t * (1.0 + b)).cos();
    let den = PI * t * (1.0 - (4.0 * b * t) * (4.0 * b * t));
    num / den
}

/// Linear convolution of `signal` with real `taps`.
pub fn convolve(signal: &[Complex64], taps: &[f64]) -> Vec<Complex64> {
    let n = signal.len();
    let t = taps.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n + t - 1];
    for (i, &s) in signal.iter().enumerate() {
        if s.re == 0.0 && s.im == 0.0 {
            continue;
        }
        for (j, &h) in taps.iter().enumerate() {
            out[i + j] += s * h;
        }
    }
    out
}

/// Upsamples symbols by zero insertion and shapes them with the RRC filter.
///
/// The output has exactly `syms.len() * sps` samples with symbol `k`
/// centered at sample `k * sps`; the filter transient beyond the frame is
/// trimmed symmetrically (edge symbols carry truncated tails and are
/// excluded from metrics downstream).
pub fn pulse_shape(syms: &[Complex64], filt: &RrcFilter) -> Result<Vec<Complex64>> {
    if syms.is_empty() {
        return Err(SimError::EmptyWaveform);
    }
    let sps = filt.sps;
    let mut up = vec![Complex64::new(0.0, 0.0); syms.len() * sps];
    for (k, &s) in syms.iter().enumerate() {
        up[k * sps] = s;
    }
    let full = convolve(&up, &filt.taps);
    let d = filt.group_delay();
    Ok(full[d..d + up.len()].to_vec())
}

/// Filters with the same RRC and samples at the symbol instants.
///
/// At `sps_in == 1` the input is already symbol-spaced and is passed
/// through unchanged.
pub fn matched_filter_downsample(
    samples: &[Complex64],
    filt: &RrcFilter,
    sps_in: usize,
) -> Vec<Complex64> {
    if sps_in == 1 {
        return samples.to_vec();
    }
    debug_assert_eq!(filt.sps, sps_in);
    let full = convolve(samples, &filt.taps);
    let d = filt.group_delay();
    let n_sym = samples.len() / sps_in;
    (0..n_sym).map(|k| full[d + k * sps_in]).collect()
}

/// Wiener phase-noise description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseNoiseParams {
    /// Laser linewidth, Hz.
    pub linewidth: f64,
    /// Sample spacing, s.
    pub sample_interval: f64,
}

/// Draws the phase random walk: phi_0 = 0 and increments of variance
/// 2*pi*linewidth*sample_interval.
pub fn phase_walk(p: PhaseNoiseParams, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let sigma = (std::f64::consts::TAU * p.linewidth * p.sample_interval).max(0.0).sqrt();
    let mut phis = Vec::with_capacity(n);
    let mut phi = 0.0;
    for i in 0..n {
        if i > 0 {
            let z: f64 = StandardNormal.sample(rng);
            phi += sigma * z;
        }
        phis.push(phi);
    }
    phis
}

/// Rotates both polarizations by the same per-sample phase track.
pub fn rotate_by_phase(w: &DualPolWaveform, phis: &[f64]) -> Result<DualPolWaveform> {
    if phis.len() != w.len() {
        return Err(SimError::LengthMismatch { a: phis.len(), b: w.len() });
    }
    let x = w.x.iter().zip(phis).map(|(v, &p)| v * Complex64::from_polar(1.0, p)).collect();
    let y = w.y.iter().zip(phis).map(|(v, &p)| v * Complex64::from_polar(1.0, p)).collect();
    DualPolWaveform::new(x, y, w.sample_rate)
}

/// Applies one laser phase-noise realization to both polarizations.
pub fn apply_phase_noise(
    w: &DualPolWaveform,
    p: PhaseNoiseParams,
    rng: &mut ChaCha8Rng,
) -> Result<DualPolWaveform> {
    let phis = phase_walk(p, w.len(), rng);
    rotate_by_phase(w, &phis)
}

/// Scales the waveform so the total mean power equals the requested dBm.
pub fn set_launch_power(w: &DualPolWaveform, p_dbm: f64) -> Result<DualPolWaveform> {
    let current = measure_power(w)?;
    if current <= 0.0 {
        return Err(SimError::ZeroPower);
    }
    let scale = (dbm_to_watts(p_dbm) / current).sqrt();
    let x = w.x.iter().map(|v| v * scale).collect();
    let y = w.y.iter().map(|v| v * scale).collect();
    DualPolWaveform::new(x, y, w.sample_rate)
}

/// Convenience: draw a seeded bit stream from a named RNG, map to symbols.
pub fn bits_to_symbols(rng: &mut ChaCha8Rng, n_symbols: usize) -> (Vec<u8>, Vec<Complex64>) {
    let bits = generate_bits(rng, 4 * n_symbols);
    let syms = map_16qam(&bits).expect("length is a multiple of 4 by construction");
    (bits, syms)
}

/// Random boolean mask helper used by tests and dropout-free paths.
pub fn gen_uniform(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen::<f64>()
}
