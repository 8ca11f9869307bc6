//! Spectral grid and FFT helpers shared by the channel and receiver DSP.
//!
//! Frequencies follow the unshifted FFT bin order: bin `k` carries
//! `omega[k] = 2*pi*fs*k/n` for `k < ceil(n/2)` and the negative
//! frequencies `2*pi*fs*(k-n)/n` above that, so no fftshift is ever
//! applied to the data.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Angular frequency of every FFT bin for an `n`-point transform.
#[derive(Debug, Clone)]
pub struct SpectralGrid {
    pub omega: Vec<f64>,
    pub sample_rate: f64,
}

impl SpectralGrid {
    pub fn new(n: usize, sample_rate: f64) -> Self {
        let half = (n + 1) / 2;
        let domega = std::f64::consts::TAU * sample_rate / n as f64;
        let omega = (0..n)
            .map(|k| {
                let kk = if k < half { k as f64 } else { k as f64 - n as f64 };
                kk * domega
            })
            .collect();
        Self { omega, sample_rate }
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }
}

/// Forward/inverse FFT pair with the 1/n normalization on the inverse.
pub struct FftPair {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    n: usize,
}

impl FftPair {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            n,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn forward(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.n);
        self.forward.process(buf);
    }

    pub fn inverse(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.n);
        self.inverse.process(buf);
        let scale = 1.0 / self.n as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }
}

/// Next power of two at or above `n`.
pub fn next_pow2(n: usize) -> usize {
    n.next_power_of_two()
}
