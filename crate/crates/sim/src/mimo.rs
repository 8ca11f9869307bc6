//! Blind 2x2 butterfly MIMO equalizer: CMA warm-up followed by
//! radius-directed equalization, T/2-spaced with symbol-rate output.
//!
//! The adaptation pass runs once over the stream; the returned symbols
//! come from a second pass with the converged taps frozen, so every
//! symbol of a static channel is equalized by the same filter.

use num_complex::Complex64;

use crate::error::{Result, SimError};

/// Ring powers of the unit-energy 16-QAM constellation.
pub const QAM16_RING_POWERS: [f64; 3] = [0.2, 1.0, 1.8];

/// CMA dispersion constant E|a|^4 / E|a|^2 for unit-energy 16-QAM.
pub const QAM16_CMA_R2: f64 = 1.32;

/// Butterfly tap set and step size.
#[derive(Debug, Clone, PartialEq)]
pub struct EqualizerState {
    pub h_xx: Vec<Complex64>,
    pub h_xy: Vec<Complex64>,
    pub h_yx: Vec<Complex64>,
    pub h_yy: Vec<Complex64>,
    pub mu: f64,
}

impl EqualizerState {
    /// Identity butterfly: unit center tap on the direct paths.
    pub fn centered(n_taps: usize, mu: f64) -> Result<Self> {
        if n_taps % 2 == 0 {
            return Err(SimError::InvalidParameter(format!("n_taps must be odd, got {n_taps}")));
        }
        let mut h_xx = vec![Complex64::default(); n_taps];
        let mut h_yy = vec![Complex64::default(); n_taps];
        h_xx[n_taps / 2] = Complex64::new(1.0, 0.0);
        h_yy[n_taps / 2] = Complex64::new(1.0, 0.0);
        Ok(Self {
            h_xx,
            h_xy: vec![Complex64::default(); n_taps],
            h_yx: vec![Complex64::default(); n_taps],
            h_yy,
            mu,
        })
    }

    pub fn n_taps(&self) -> usize {
        self.h_xx.len()
    }
}

/// Adaptation schedule.
#[derive(Debug, Clone, Copy)]
pub struct RdeConfig {
    /// Symbols equalized with the constant-modulus error before switching
    /// to radius-directed updates.
    pub cma_warmup_symbols: usize,
    /// Step-size gear shift for the final averaged quarter of the pass;
    /// trims steady-state tap jitter after the error has converged.
    pub rde_mu_scale: f64,
}

impl Default for RdeConfig {
    fn default() -> Self {
        Self { cma_warmup_symbols: 10_000, rde_mu_scale: 0.25 }
    }
}

fn nearest_ring_power(p: f64) -> f64 {
    let mut best = QAM16_RING_POWERS[0];
    let mut dist = (p - best).abs();
    for &r in &QAM16_RING_POWERS[1..] {
        let d = (p - r).abs();
        if d < dist {
            dist = d;
            best = r;
        }
    }
    best
}

struct Butterfly<'a> {
    x: &'a [Complex64],
    y: &'a [Complex64],
    half: usize,
}

impl Butterfly<'_> {
    fn output(&self, state: &EqualizerState, center: usize) -> (Complex64, Complex64) {
        let start = center - self.half;
        let n = state.n_taps();
        let mut ox = Complex64::default();
        let mut oy = Complex64::default();
        for m in 0..n {
            let ux = self.x[start + m];
            let uy = self.y[start + m];
            ox += state.h_xx[m] * ux + state.h_xy[m] * uy;
            oy += state.h_yx[m] * ux + state.h_yy[m] * uy;
        }
        (ox, oy)
    }

    fn update(&self, state: &mut EqualizerState, center: usize, ox: Complex64, oy: Complex64, r2x: f64, r2y: f64) {
        let start = center - self.half;
        let ex = state.mu * (r2x - ox.norm_sqr());
        let ey = state.mu * (r2y - oy.norm_sqr());
        let gx = ex * ox;
        let gy = ey * oy;
        for m in 0..state.n_taps() {
            let ux = self.x[start + m].conj();
            let uy = self.y[start + m].conj();
            state.h_xx[m] += gx * ux;
            state.h_xy[m] += gx * uy;
            state.h_yx[m] += gy * ux;
            state.h_yy[m] += gy * uy;
        }
    }
}

/// Runs the blind equalizer over a 2-samples/symbol stream pair.
///
/// Returns one output per input symbol slot (length / 2). Slots whose tap
/// window would leave the stream are passed through from the center
/// sample; they sit inside the frame guard that callers already discard.
pub fn rde_mimo(
    x: &[Complex64],
    y: &[Complex64],
    mut state: EqualizerState,
    cfg: &RdeConfig,
) -> Result<(Vec<Complex64>, Vec<Complex64>, EqualizerState)> {
    if x.len() != y.len() {
        return Err(SimError::LengthMismatch { a: x.len(), b: y.len() });
    }
    let n_sym = x.len() / 2;
    let half = state.n_taps() / 2;
    let base_mu = state.mu;
    let bfly = Butterfly { x, y, half };
    let input_power = {
        let e: f64 = x.iter().map(|v| v.norm_sqr()).sum::<f64>()
            + y.iter().map(|v| v.norm_sqr()).sum::<f64>();
        e / (2.0 * x.len() as f64)
    };

    // Pass 1: adapt. CMA error for the warm-up, then radius-directed.
    // Taps over the second half of the pass are averaged away from the
    // step-size jitter; the channel within one frame is static, and the
    // CMA transient has died out by then.
    let n_valid = (0..n_sym)
        .filter(|k| {
            let c = 2 * k;
            c >= half && c + half < x.len()
        })
        .count();
    let after_warmup = n_valid.saturating_sub(cfg.cma_warmup_symbols);
    let shift_start = cfg.cma_warmup_symbols + after_warmup / 4;
    let avg_start = cfg.cma_warmup_symbols + after_warmup / 2;
    let mut tap_sum = vec![Complex64::default(); 4 * state.n_taps()];
    let mut tap_count = 0usize;
    let mut seen = 0usize;
    for k in 0..n_sym {
        let center = 2 * k;
        if center < half || center + half >= x.len() {
            continue;
        }
        let (ox, oy) = bfly.output(&state, center);
        let warmup = seen < cfg.cma_warmup_symbols;
        let (r2x, r2y) = if warmup {
            (QAM16_CMA_R2, QAM16_CMA_R2)
        } else {
            (nearest_ring_power(ox.norm_sqr()), nearest_ring_power(oy.norm_sqr()))
        };
        // Full step through acquisition and early RDE; gear down a
        // quarter of the way in so the shift transient dies before the
        // averaging window opens.
        state.mu = if seen >= shift_start { base_mu * cfg.rde_mu_scale } else { base_mu };
        bfly.update(&mut state, center, ox, oy, r2x, r2y);
        seen += 1;
        if seen > avg_start {
            let n = state.n_taps();
            for m in 0..n {
                tap_sum[m] += state.h_xx[m];
                tap_sum[n + m] += state.h_xy[m];
                tap_sum[2 * n + m] += state.h_yx[m];
                tap_sum[3 * n + m] += state.h_yy[m];
            }
            tap_count += 1;
        }
        if seen % 4096 == 0 {
            let out_power = 0.5 * (ox.norm_sqr() + oy.norm_sqr());
            if out_power > 10.0 * input_power.max(1e-30) {
                return Err(SimError::EqualizerDiverged {
                    output_power: out_power,
                    input_power,
                });
            }
        }
    }
    if tap_count > 256 {
        let n = state.n_taps();
        let inv = 1.0 / tap_count as f64;
        for m in 0..n {
            state.h_xx[m] = tap_sum[m] * inv;
            state.h_xy[m] = tap_sum[n + m] * inv;
            state.h_yx[m] = tap_sum[2 * n + m] * inv;
            state.h_yy[m] = tap_sum[3 * n + m] * inv;
        }
    }
    state.mu = base_mu;

    // Pass 2: equalize everything with the frozen taps.
    let mut out_x = Vec::with_capacity(n_sym);
    let mut out_y = Vec::with_capacity(n_sym);
    for k in 0..n_sym {
        let center = 2 * k;
        if center < half || center + half >= x.len() {
            out_x.push(x[center]);
            out_y.push(y[center]);
        } else {
            let (ox, oy) = bfly.output(&state, center);
            out_x.push(ox);
            out_y.push(oy);
        }
    }
    Ok((out_x, out_y, state))
}

/// Mean distance of output powers from the nearest 16-QAM ring; a
/// convergence figure of merit.
pub fn mean_radius_error(symbols: &[Complex64]) -> f64 {
    if symbols.is_empty() {
        return 0.0;
    }
    symbols
        .iter()
        .map(|s| {
            let p = s.norm_sqr();
            (p - nearest_ring_power(p)).abs()
        })
        .sum::<f64>()
        / symbols.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_rng;
    use crate::tx::{bits_to_symbols, matched_filter_downsample, pulse_shape, RrcFilter};

    /// ISI-free 2 SpS stream: TX RRC then matched RX RRC. The long span
    /// keeps the filter's own ISI floor well under the figures asserted
    /// on the equalizer.
    fn two_sps_stream(n_sym: usize, seed: u64) -> (Vec<Complex64>, Vec<Complex64>) {
        let filt = RrcFilter::new(0.25, 48, 2).unwrap();
        let mut rng = seeded_rng(seed);
        let (_, sx) = bits_to_symbols(&mut rng, n_sym);
        let (_, sy) = bits_to_symbols(&mut rng, n_sym);
        let shape = |s: &[Complex64]| {
            let shaped = pulse_shape(s, &filt).unwrap();
            let full = crate::tx::convolve(&shaped, &filt.taps);
            let d = filt.group_delay();
            full[d..d + shaped.len()].to_vec()
        };
        (shape(&sx), shape(&sy))
    }

    #[test]
    fn ring_powers_match_brute_force() {
        // |s|^2 over the 16 unit-energy points is {2, 10, 18} / 10.
        let mut rings: Vec<f64> = Vec::new();
        for v in 0..16u8 {
            let bits = [(v >> 3) & 1, (v >> 2) & 1, (v >> 1) & 1, v & 1];
            let p = crate::tx::map_16qam(&bits).unwrap()[0].norm_sqr();
            if !rings.iter().any(|r| (r - p).abs() < 1e-12) {
                rings.push(p);
            }
        }
        rings.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(rings.len(), 3);
        for (r, e) in rings.iter().zip(QAM16_RING_POWERS) {
            assert!((r - e).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_channel_converges_to_identity_butterfly() {
        let (x, y) = two_sps_stream(100_000, 1);
        let state = EqualizerState::centered(25, 1e-3).unwrap();
        let cfg = RdeConfig::default();
        let (ox, _oy, state) = rde_mimo(&x, &y, state, &cfg).unwrap();
        let center = state.n_taps() / 2;
        assert!((state.h_xx[center] - Complex64::new(1.0, 0.0)).norm() < 0.1);
        assert!(state.h_xy.iter().map(|v| v.norm()).fold(0.0, f64::max) < 0.05);
        let tail = &ox[90_000..99_000];
        assert!(mean_radius_error(tail) < 1e-3, "radius error {}", mean_radius_error(tail));
    }

    #[test]
    fn static_rotation_is_unwound() {
        let (x, y) = two_sps_stream(30_000, 2);
        let theta = std::f64::consts::PI / 6.0;
        let (s, c) = theta.sin_cos();
        let rx: Vec<Complex64> = x.iter().zip(&y).map(|(a, b)| c * a + s * b).collect();
        let ry: Vec<Complex64> = x.iter().zip(&y).map(|(a, b)| -s * a + c * b).collect();
        let state = EqualizerState::centered(25, 1e-3).unwrap();
        let cfg = RdeConfig { cma_warmup_symbols: 10_000, ..RdeConfig::default() };
        let (ox, oy, _) = rde_mimo(&rx, &ry, state, &cfg).unwrap();
        // Ring-power histogram peaks at {0.2, 1.0, 1.8} within 0.02.
        for out in [&ox, &oy] {
            let tail = &out[25_000..29_000];
            let mut by_ring = [(0.0f64, 0usize); 3];
            for s in tail {
                let p = s.norm_sqr();
                let ring = QAM16_RING_POWERS
                    .iter()
                    .enumerate()
                    .min_by(|a, b| (p - a.1).abs().partial_cmp(&(p - b.1).abs()).unwrap())
                    .unwrap()
                    .0;
                by_ring[ring].0 += p;
                by_ring[ring].1 += 1;
            }
            for (ring, &(sum, n)) in by_ring.iter().enumerate() {
                assert!(n > 100, "ring {ring} underpopulated");
                let mean = sum / n as f64;
                assert!(
                    (mean - QAM16_RING_POWERS[ring]).abs() < 0.02,
                    "ring {ring} mean {mean}"
                );
            }
        }
    }

    #[test]
    fn even_tap_count_is_rejected() {
        assert!(EqualizerState::centered(24, 1e-3).is_err());
    }
}




