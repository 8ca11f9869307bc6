//! Forward fiber propagation: split-step solver with per-segment linear,
//! PMD, and nonlinear steps, plus EDFA gain and ASE noise at each span end.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Result, SimError};
use crate::signal::{DualPolWaveform, SystemParams, PLANCK, SPEED_OF_LIGHT};
use crate::spectral::{FftPair, SpectralGrid};

/// Birefringence state of one fiber segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PmdSegment {
    /// Rotation angle, rad.
    pub theta: f64,
    /// Rotation phase, rad.
    pub phi: f64,
    /// Differential group delay, s.
    pub dgd: f64,
}

/// One random draw of the whole link's birefringence, fixed per experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct PmdRealization {
    pub n_spans: usize,
    pub steps_per_span: usize,
    pub segments: Vec<PmdSegment>,
}

impl PmdRealization {
    pub fn segment(&self, span: usize, step: usize) -> &PmdSegment {
        &self.segments[span * self.steps_per_span + step]
    }

    /// Writes the realization as one segment per line:
    /// `span segment theta phi dgd` with round-trip-exact decimal floats.
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# spans={} steps_per_span={}", self.n_spans, self.steps_per_span)?;
        for (i, seg) in self.segments.iter().enumerate() {
            let span = i / self.steps_per_span;
            let step = i % self.steps_per_span;
            writeln!(w, "{} {} {} {} {}", span, step, seg.theta, seg.phi, seg.dgd)?;
        }
        Ok(())
    }

    pub fn read_text<R: BufRead>(r: R) -> Result<Self> {
        let mut n_spans = 0usize;
        let mut steps_per_span = 0usize;
        let mut segments = Vec::new();
        for line in r.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                for tok in rest.split_whitespace() {
                    if let Some(v) = tok.strip_prefix("spans=") {
                        n_spans = v
                            .parse()
                            .map_err(|_| SimError::BadFormat(format!("bad span count {v}")))?;
                    } else if let Some(v) = tok.strip_prefix("steps_per_span=") {
                        steps_per_span = v
                            .parse()
                            .map_err(|_| SimError::BadFormat(format!("bad step count {v}")))?;
                    }
                }
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 5 {
                return Err(SimError::BadFormat(format!("expected 5 fields, got: {line}")));
            }
            let parse =
                |s: &str| s.parse::<f64>().map_err(|_| SimError::BadFormat(format!("bad float {s}")));
            segments.push(PmdSegment {
                theta: parse(fields[2])?,
                phi: parse(fields[3])?,
                dgd: parse(fields[4])?,
            });
        }
        if n_spans * steps_per_span != segments.len() {
            return Err(SimError::BadFormat(format!(
                "header says {}x{} segments, file has {}",
                n_spans,
                steps_per_span,
                segments.len()
            )));
        }
        Ok(Self { n_spans, steps_per_span, segments })
    }

    pub fn save<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        self.write_text(std::fs::File::create(path)?)
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::read_text(BufReader::new(std::fs::File::open(path)?))
    }
}

/// Draws theta, phi ~ U[0, 2pi) and DGD ~ N(0, pmd_coef * sqrt(segment))
/// for every segment of the link.
pub fn draw_pmd(params: &SystemParams, rng: &mut ChaCha8Rng) -> PmdRealization {
    let n = params.n_spans * params.steps_per_span;
    let sigma = params.pmd_coef * params.segment_length().sqrt();
    let mut segments = Vec::with_capacity(n);
    for _ in 0..n {
        let theta = rand::Rng::gen::<f64>(rng) * std::f64::consts::TAU;
        let phi = rand::Rng::gen::<f64>(rng) * std::f64::consts::TAU;
        let z: f64 = StandardNormal.sample(rng);
        segments.push(PmdSegment { theta, phi, dgd: sigma * z });
    }
    PmdRealization { n_spans: params.n_spans, steps_per_span: params.steps_per_span, segments }
}

/// Frequency-domain loss + chromatic dispersion over one segment:
/// multiply by exp(-alpha/2 * dz + j*beta2/2 * omega^2 * dz).
pub fn linear_step(w: &DualPolWaveform, dz: f64, params: &SystemParams) -> DualPolWaveform {
    let mut out = w.clone();
    let fft = FftPair::new(w.len());
    let grid = SpectralGrid::new(w.len(), w.sample_rate);
    linear_step_inplace(&mut out.x, &mut out.y, dz, params, &fft, &grid, None);
    out
}

#[allow(clippy::too_many_arguments)]
fn linear_step_inplace(
    x: &mut [Complex64],
    y: &mut [Complex64],
    dz: f64,
    params: &SystemParams,
    fft: &FftPair,
    grid: &SpectralGrid,
    pmd: Option<&PmdSegment>,
) {
    fft.forward(x);
    fft.forward(y);
    let loss = (-0.5 * params.alpha * dz).exp();
    for k in 0..grid.len() {
        let om = grid.omega[k];
        let phase = 0.5 * params.beta2 * om * om * dz;
        let mult = loss * Complex64::from_polar(1.0, phase);
        let mut xv = x[k] * mult;
        let mut yv = y[k] * mult;
        if let Some(seg) = pmd {
            let (nx, ny) = apply_jones(seg, om, xv, yv);
            xv = nx;
            yv = ny;
        }
        x[k] = xv;
        y[k] = yv;
    }
    fft.inverse(x);
    fft.inverse(y);
}

/// J(omega) = R * D(omega) applied to the (x, y) spectrum vector.
fn apply_jones(seg: &PmdSegment, omega: f64, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
    // DGD operator: diag(exp(-j*omega*tau/2), exp(+j*omega*tau/2)).
    let d = Complex64::from_polar(1.0, -0.5 * omega * seg.dgd);
    let xd = x * d;
    let yd = y * d.conj();
    // Rotation matrix with half-phase factors.
    let ep = Complex64::from_polar(1.0, 0.5 * seg.phi);
    let (sin_t, cos_t) = seg.theta.sin_cos();
    let r00 = ep * cos_t;
    let r01 = ep.conj() * sin_t;
    let r10 = -ep * sin_t;
    let r11 = ep.conj() * cos_t;
    (r00 * xd + r01 * yd, r10 * xd + r11 * yd)
}

/// Frequency-domain PMD step for one segment.
pub fn pmd_step(w: &DualPolWaveform, seg: &PmdSegment) -> DualPolWaveform {
    let mut out = w.clone();
    let fft = FftPair::new(w.len());
    let grid = SpectralGrid::new(w.len(), w.sample_rate);
    fft.forward(&mut out.x);
    fft.forward(&mut out.y);
    for k in 0..grid.len() {
        let (nx, ny) = apply_jones(seg, grid.omega[k], out.x[k], out.y[k]);
        out.x[k] = nx;
        out.y[k] = ny;
    }
    fft.inverse(&mut out.x);
    fft.inverse(&mut out.y);
    out
}

/// Time-domain Kerr phase rotation over one segment:
/// q_x *= exp(j*gamma*dz*(|q_x|^2 + 2/3*|q_y|^2)) and symmetrically for y.
pub fn nonlinear_step(w: &DualPolWaveform, dz: f64, params: &SystemParams) -> DualPolWaveform {
    let mut out = w.clone();
    nonlinear_step_inplace(&mut out.x, &mut out.y, params.gamma * dz);
    out
}

fn nonlinear_step_inplace(x: &mut [Complex64], y: &mut [Complex64], gamma_dz: f64) {
    if gamma_dz == 0.0 {
        return;
    }
    for (xv, yv) in x.iter_mut().zip(y.iter_mut()) {
        let px = xv.norm_sqr();
        let py = yv.norm_sqr();
        let rot_x = Complex64::from_polar(1.0, gamma_dz * (px + 2.0 / 3.0 * py));
        let rot_y = Complex64::from_polar(1.0, gamma_dz * (py + 2.0 / 3.0 * px));
        *xv *= rot_x;
        *yv *= rot_y;
    }
}

/// Photon energy at the carrier wavelength, J.
pub fn photon_energy(wavelength_m: f64) -> f64 {
    PLANCK * SPEED_OF_LIGHT / wavelength_m
}

/// Total ASE power per polarization added by one amplifier over the
/// simulation bandwidth: n_sp * h*nu * (G - 1) * Fs with
/// n_sp = 10^(NF/10) / 2.
pub fn ase_power_per_pol(params: &SystemParams, sample_rate: f64) -> f64 {
    let gain = params.span_gain();
    let n_sp = 10f64.powf(params.noise_figure_db / 10.0) / 2.0;
    n_sp * photon_energy(params.center_wavelength) * (gain - 1.0) * sample_rate
}

/// EDFA: amplitude gain restoring one span of loss, plus circular complex
/// Gaussian ASE on each polarization. `ase_rng` of `None` switches the
/// noise off (test hook).
pub fn edfa(
    w: &DualPolWaveform,
    params: &SystemParams,
    ase_rng: Option<&mut ChaCha8Rng>,
) -> DualPolWaveform {
    let mut out = w.clone();
    edfa_inplace(&mut out.x, &mut out.y, params, w.sample_rate, ase_rng);
    out
}

fn edfa_inplace(
    x: &mut [Complex64],
    y: &mut [Complex64],
    params: &SystemParams,
    sample_rate: f64,
    ase_rng: Option<&mut ChaCha8Rng>,
) {
    let amp_gain = params.span_gain().sqrt();
    for v in x.iter_mut() {
        *v *= amp_gain;
    }
    for v in y.iter_mut() {
        *v *= amp_gain;
    }
    if let Some(rng) = ase_rng {
        // Split the per-polarization ASE power equally between quadratures.
        let sigma = (0.5 * ase_power_per_pol(params, sample_rate)).sqrt();
        for v in x.iter_mut() {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            *v += Complex64::new(sigma * re, sigma * im);
        }
        for v in y.iter_mut() {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            *v += Complex64::new(sigma * re, sigma * im);
        }
    }
}

/// Propagates the field over the full link: per span, `steps_per_span`
/// segments of (linear; PMD; nonlinear), then the EDFA.
///
/// `pmd` of `None` disables the PMD step and `ase_rng` of `None` disables
/// amplifier noise; both switches exist for oracle tests.
pub fn propagate(
    w: &DualPolWaveform,
    params: &SystemParams,
    pmd: Option<&PmdRealization>,
    mut ase_rng: Option<&mut ChaCha8Rng>,
) -> Result<DualPolWaveform> {
    params.validate()?;
    if w.is_empty() {
        return Err(SimError::EmptyWaveform);
    }
    if let Some(p) = pmd {
        if p.n_spans != params.n_spans || p.steps_per_span != params.steps_per_span {
            return Err(SimError::InvalidParameter(format!(
                "PMD realization is {}x{} but params are {}x{}",
                p.n_spans, p.steps_per_span, params.n_spans, params.steps_per_span
            )));
        }
    }
    let mut out = w.clone();
    let fft = FftPair::new(w.len());
    let grid = SpectralGrid::new(w.len(), w.sample_rate);
    let dz = params.segment_length();
    let gamma_dz = params.gamma * dz;
    for span in 0..params.n_spans {
        for step in 0..params.steps_per_span {
            let seg = pmd.map(|p| p.segment(span, step));
            linear_step_inplace(&mut out.x, &mut out.y, dz, params, &fft, &grid, seg);
            nonlinear_step_inplace(&mut out.x, &mut out.y, gamma_dz);
        }
        edfa_inplace(&mut out.x, &mut out.y, params, w.sample_rate, ase_rng.as_deref_mut());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{seeded_rng, stream_rng, Stream};
    use crate::signal::measure_power;
    use proptest::prelude::*;

    fn test_params() -> SystemParams {
        SystemParams {
            alpha: SystemParams::alpha_from_db_per_km(0.2),
            beta2: SystemParams::beta2_from_dispersion(17.0, 1550e-9),
            gamma: 1.4e-3,
            pmd_coef: 0.05e-12 / 1000f64.sqrt(),
            span_length: 80e3,
            n_spans: 2,
            sps_forward: 4,
            sps_rx: 2,
            steps_per_span: 10,
            linewidth: 0.0,
            noise_figure_db: 5.0,
            rolloff: 0.25,
            center_wavelength: 1550e-9,
        }
    }

    fn random_waveform(n: usize, seed: u64, fs: f64) -> DualPolWaveform {
        let mut rng = seeded_rng(seed);
        let g = |rng: &mut rand_chacha::ChaCha8Rng| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im) * 0.01
        };
        let x = (0..n).map(|_| g(&mut rng)).collect();
        let y = (0..n).map(|_| g(&mut rng)).collect();
        DualPolWaveform::new(x, y, fs).unwrap()
    }

    #[test]
    fn zero_pmd_coefficient_gives_zero_dgd() {
        let mut p = test_params();
        p.pmd_coef = 0.0;
        let mut rng = stream_rng(1, Stream::Pmd);
        let real = draw_pmd(&p, &mut rng);
        assert!(real.segments.iter().all(|s| s.dgd == 0.0));
        assert_eq!(real.segments.len(), p.n_spans * p.steps_per_span);
    }

    #[test]
    fn dgd_standard_deviation_matches_coefficient() {
        // 1 km segments at 0.05 ps/sqrt(km) -> sigma = 0.05 ps.
        let mut p = test_params();
        p.span_length = 1000.0 * 1000.0;
        p.steps_per_span = 1000;
        p.n_spans = 100;
        let mut rng = stream_rng(11, Stream::Pmd);
        let real = draw_pmd(&p, &mut rng);
        assert_eq!(real.segments.len(), 100_000);
        let var: f64 =
            real.segments.iter().map(|s| s.dgd * s.dgd).sum::<f64>() / real.segments.len() as f64;
        let std = var.sqrt();
        assert!((std / 0.05e-12 - 1.0).abs() < 0.02, "std {std}");
    }

    #[test]
    fn pmd_draw_is_deterministic() {
        let p = test_params();
        let a = draw_pmd(&p, &mut stream_rng(5, Stream::Pmd));
        let b = draw_pmd(&p, &mut stream_rng(5, Stream::Pmd));
        assert_eq!(a, b);
    }

    #[test]
    fn pmd_text_round_trip() {
        let p = test_params();
        let real = draw_pmd(&p, &mut stream_rng(5, Stream::Pmd));
        let mut buf = Vec::new();
        real.write_text(&mut buf).unwrap();
        let back = PmdRealization::read_text(std::io::Cursor::new(buf)).unwrap();
        assert_eq!(real, back);
    }

    #[test]
    fn linear_step_without_impairments_is_identity() {
        let mut p = test_params();
        p.alpha = 0.0;
        p.beta2 = 0.0;
        let w = random_waveform(256, 3, 128e9);
        let out = linear_step(&w, 1e4, &p);
        for i in 0..w.len() {
            assert!((out.x[i] - w.x[i]).norm() < 1e-12);
            assert!((out.y[i] - w.y[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn loss_only_step_scales_energy_exactly() {
        let mut p = test_params();
        p.beta2 = 0.0;
        let w = random_waveform(256, 4, 128e9);
        let dz = 5e3;
        let out = linear_step(&w, dz, &p);
        let ratio = out.energy() / w.energy();
        assert!((ratio - (-p.alpha * dz).exp()).abs() < 1e-12);
    }

    #[test]
    fn single_tone_gets_closed_form_phase_and_loss() {
        let p = test_params();
        let n = 512;
        let fs = 128e9;
        let bin = 37;
        let grid = SpectralGrid::new(n, fs);
        let om = grid.omega[bin];
        let x: Vec<Complex64> = (0..n)
            .map(|i| Complex64::from_polar(1.0, om * i as f64 / fs))
            .collect();
        let w = DualPolWaveform::new(x.clone(), vec![Complex64::default(); n], fs).unwrap();
        let dz = 2e4;
        let out = linear_step(&w, dz, &p);
        let expect_mult = Complex64::from_polar(
            (-0.5 * p.alpha * dz).exp(),
            0.5 * p.beta2 * om * om * dz,
        );
        for i in 0..n {
            assert!((out.x[i] - x[i] * expect_mult).norm() < 1e-9);
        }
    }

    #[test]
    fn trivial_pmd_segment_is_identity() {
        let w = random_waveform(128, 6, 64e9);
        let seg = PmdSegment { theta: 0.0, phi: 0.0, dgd: 0.0 };
        let out = pmd_step(&w, &seg);
        for i in 0..w.len() {
            assert!((out.x[i] - w.x[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn quarter_turn_rotation_swaps_polarizations() {
        let w = random_waveform(64, 7, 64e9);
        let seg = PmdSegment { theta: std::f64::consts::FRAC_PI_2, phi: 0.0, dgd: 0.0 };
        let out = pmd_step(&w, &seg);
        for i in 0..w.len() {
            assert!((out.x[i] - w.y[i]).norm() < 1e-12);
            assert!((out.y[i] + w.x[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn nonlinear_step_without_gamma_is_identity() {
        let mut p = test_params();
        p.gamma = 0.0;
        let w = random_waveform(64, 8, 64e9);
        let out = nonlinear_step(&w, 1e3, &p);
        assert_eq!(out, w);
    }

    #[test]
    fn nonlinear_step_is_pure_phase() {
        let p = test_params();
        let w = random_waveform(64, 9, 64e9);
        let out = nonlinear_step(&w, 1e3, &p);
        for i in 0..w.len() {
            assert!((out.x[i].norm() - w.x[i].norm()).abs() < 1e-15);
            assert!((out.y[i].norm() - w.y[i].norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn unit_field_unit_gamma_dz_rotates_one_radian() {
        let mut p = test_params();
        p.gamma = 1e-3;
        let dz = 1e3; // gamma*dz = 1
        let w = DualPolWaveform::new(
            vec![Complex64::new(1.0, 0.0); 16],
            vec![Complex64::default(); 16],
            1e9,
        )
        .unwrap();
        let out = nonlinear_step(&w, dz, &p);
        for v in &out.x {
            assert!((v.arg() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn edfa_gain_matches_span_loss() {
        let p = test_params();
        // 0.2 dB/km over 80 km is 16 dB of gain.
        let g_db = 10.0 * p.span_gain().log10();
        assert!((g_db - 16.0).abs() < 1e-9);
        let w = random_waveform(128, 10, 64e9);
        let out = edfa(&w, &p, None);
        let ratio = measure_power(&out).unwrap() / measure_power(&w).unwrap();
        assert!((ratio / p.span_gain() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ase_power_matches_closed_form() {
        let mut p = test_params();
        p.noise_figure_db = 5.0;
        let fs = 512e9;
        let expect = ase_power_per_pol(&p, fs);
        assert!((expect / 4.0e-6 - 1.0).abs() < 0.01, "closed form {expect}");
        // Monte-Carlo over 1000 draws of a 1024-sample frame.
        let zero = DualPolWaveform::new(
            vec![Complex64::default(); 1024],
            vec![Complex64::default(); 1024],
            fs,
        )
        .unwrap();
        let mut rng = stream_rng(3, Stream::Ase);
        let mut acc = 0.0;
        for _ in 0..1000 {
            let out = edfa(&zero, &p, Some(&mut rng));
            acc += out.x.iter().map(|v| v.norm_sqr()).sum::<f64>() / 1024.0;
        }
        let measured = acc / 1000.0;
        assert!((measured / expect - 1.0).abs() < 0.03, "measured {measured} vs {expect}");
    }

    #[test]
    fn linear_channel_preserves_spectrum_magnitude() {
        let mut p = test_params();
        p.gamma = 0.0;
        let w = random_waveform(512, 11, 128e9);
        let out = propagate(&w, &p, None, None).unwrap();
        let fft = FftPair::new(512);
        let mut fin = w.x.clone();
        let mut fout = out.x.clone();
        fft.forward(&mut fin);
        fft.forward(&mut fout);
        for k in 0..512 {
            assert!(
                (fout[k].norm() - fin[k].norm()).abs() < 1e-9 * fin[k].norm().max(1e-6),
                "bin {k}"
            );
        }
    }

    #[test]
    fn span_energy_drops_by_span_loss_before_amplifier() {
        let mut p = test_params();
        p.n_spans = 1;
        p.gamma = 0.0;
        let w = random_waveform(256, 12, 128e9);
        // Propagate without the EDFA by composing the segments directly.
        let mut cur = w.clone();
        for _ in 0..p.steps_per_span {
            cur = linear_step(&cur, p.segment_length(), &p);
        }
        let ratio = cur.energy() / w.energy();
        assert!((ratio - (-p.alpha * p.span_length).exp()).abs() < 1e-12);
    }

    #[test]
    fn propagation_is_deterministic() {
        let p = test_params();
        let w = random_waveform(256, 13, 128e9);
        let pmd = draw_pmd(&p, &mut stream_rng(1, Stream::Pmd));
        let a = propagate(&w, &p, Some(&pmd), Some(&mut stream_rng(2, Stream::Ase))).unwrap();
        let b = propagate(&w, &p, Some(&pmd), Some(&mut stream_rng(2, Stream::Ase))).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn all_impairments_off_is_identity() {
        let mut p = test_params();
        p.alpha = 0.0;
        p.beta2 = 0.0;
        p.gamma = 0.0;
        let w = random_waveform(128, 14, 64e9);
        let out = propagate(&w, &p, None, None).unwrap();
        for i in 0..w.len() {
            assert!((out.x[i] - w.x[i]).norm() < 1e-12);
            assert!((out.y[i] - w.y[i]).norm() < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10))]
        #[test]
        fn pmd_step_conserves_energy(seed in 0u64..500, theta in 0.0..std::f64::consts::TAU,
                                     phi in 0.0..std::f64::consts::TAU, dgd_ps in -1.0f64..1.0) {
            let w = random_waveform(128, seed, 64e9);
            let seg = PmdSegment { theta, phi, dgd: dgd_ps * 1e-12 };
            let out = pmd_step(&w, &seg);
            prop_assert!((out.energy() / w.energy() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn nonlinear_step_conserves_energy(seed in 0u64..500) {
            let p = test_params();
            let w = random_waveform(128, seed, 64e9);
            let out = nonlinear_step(&w, 1e4, &p);
            prop_assert!((out.energy() / w.energy() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn linear_channel_is_homogeneous(seed in 0u64..200, a in 0.25f64..4.0) {
            let mut p = test_params();
            p.gamma = 0.0;
            p.steps_per_span = 2;
            let w = random_waveform(128, seed, 64e9);
            let scaled = DualPolWaveform::new(
                w.x.iter().map(|v| v * a).collect(),
                w.y.iter().map(|v| v * a).collect(),
                w.sample_rate,
            ).unwrap();
            let pmd = draw_pmd(&p, &mut seeded_rng(seed));
            let out1 = propagate(&w, &p, Some(&pmd), None).unwrap();
            let out2 = propagate(&scaled, &p, Some(&pmd), None).unwrap();
            for i in 0..w.len() {
                prop_assert!((out2.x[i] - out1.x[i] * a).norm() <= 1e-9 * out1.x[i].norm().max(1e-3));
            }
        }
    }
}
