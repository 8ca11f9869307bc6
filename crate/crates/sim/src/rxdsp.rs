//! Receiver front-end operations: rate conversion, one-shot chromatic
//! dispersion compensation, and digital backpropagation.

use num_complex::Complex64;

use crate::error::{Result, SimError};
use crate::signal::{DualPolWaveform, SystemParams};
use crate::spectral::{FftPair, SpectralGrid};

/// Rational resampling by spectrum truncation/extension.
///
/// Exact for signals band-limited below half the lower of the two rates,
/// which holds for RRC-shaped traffic at 2 samples/symbol and above.
pub fn resample(w: &DualPolWaveform, sps_in: usize, sps_out: usize) -> Result<DualPolWaveform> {
    if sps_in == 0 || sps_out == 0 {
        return Err(SimError::InvalidParameter("sps must be positive".into()));
    }
    if sps_in == sps_out {
        return Ok(w.clone());
    }
    let n = w.len();
    if n * sps_out % sps_in != 0 {
        return Err(SimError::InvalidParameter(format!(
            "length {n} not divisible for {sps_in} -> {sps_out} resampling"
        )));
    }
    let m = n * sps_out / sps_in;
    let fft_in = FftPair::new(n);
    let fft_out = FftPair::new(m);
    let resample_pol = |src: &[Complex64]| -> Vec<Complex64> {
        let mut spec = src.to_vec();
        fft_in.forward(&mut spec);
        let mut out_spec = vec![Complex64::default(); m];
        let keep = m.min(n);
        let pos = keep / 2; // positive-frequency bins to keep
        let neg = keep - pos;
        out_spec[..pos].copy_from_slice(&spec[..pos]);
        out_spec[m - neg..].copy_from_slice(&spec[n - neg..]);
        fft_out.inverse(&mut out_spec);
        let scale = m as f64 / n as f64;
        out_spec.iter_mut().for_each(|v| *v *= scale);
        out_spec
    };
    DualPolWaveform::new(resample_pol(&w.x), resample_pol(&w.y), w.sample_rate * m as f64 / n as f64)
}

/// One-shot CD compensation: multiplies the spectrum of each polarization
/// by exp(-j*beta2/2 * omega^2 * length), the exact inverse of the
/// accumulated forward dispersion phase.
pub fn cd_compensate(w: &DualPolWaveform, params: &SystemParams, total_length: f64) -> DualPolWaveform {
    let mut out = w.clone();
    let fft = FftPair::new(w.len());
    let grid = SpectralGrid::new(w.len(), w.sample_rate);
    for buf in [&mut out.x, &mut out.y] {
        fft.forward(buf);
        for k in 0..grid.len() {
            let om = grid.omega[k];
            let phase = -0.5 * params.beta2 * om * om * total_length;
            buf[k] *= Complex64::from_polar(1.0, phase);
        }
        fft.inverse(buf);
    }
    out
}

/// Digital backpropagation: per span, removes the amplifier gain and runs
/// `steps_per_span` segments of inverse nonlinear (gamma -> -gamma) then
/// inverse linear (beta2 sign flipped, loss replaced by digital gain).
///
/// PMD is not inverted (it is unknown at the receiver); the output feeds
/// the same RDE + CPE chain as plain linear equalization.
pub fn dbp(w: &DualPolWaveform, params: &SystemParams, steps_per_span: usize) -> Result<DualPolWaveform> {
    if steps_per_span == 0 {
        return Err(SimError::InvalidParameter("dbp steps_per_span must be >= 1".into()));
    }
    let mut out = w.clone();
    let fft = FftPair::new(w.len());
    let grid = SpectralGrid::new(w.len(), w.sample_rate);
    let dz = params.span_length / steps_per_span as f64;
    let neg_gamma_dz = -params.gamma * dz;
    let inv_amp_gain = 1.0 / params.span_gain().sqrt();
    for _span in 0..params.n_spans {
        for buf in [&mut out.x, &mut out.y] {
            buf.iter_mut().for_each(|v| *v *= inv_amp_gain);
        }
        for _step in 0..steps_per_span {
            // Inverse nonlinear rotation at the local field.
            if neg_gamma_dz != 0.0 {
                for i in 0..out.x.len() {
                    let px = out.x[i].norm_sqr();
                    let py = out.y[i].norm_sqr();
                    out.x[i] *= Complex64::from_polar(1.0, neg_gamma_dz * (px + 2.0 / 3.0 * py));
                    out.y[i] *= Complex64::from_polar(1.0, neg_gamma_dz * (py + 2.0 / 3.0 * px));
                }
            }
            // Inverse linear: dispersion reversed, span loss undone digitally.
            let gain = (0.5 * params.alpha * dz).exp();
            for buf in [&mut out.x, &mut out.y] {
                fft.forward(buf);
                for k in 0..grid.len() {
                    let om = grid.omega[k];
                    let phase = -0.5 * params.beta2 * om * om * dz;
                    buf[k] *= gain * Complex64::from_polar(1.0, phase);
                }
                fft.inverse(buf);
            }
        }
    }
    Ok(out)
}
