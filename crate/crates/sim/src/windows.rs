//! Neural-equalizer input extraction: sliding sample windows around each
//! target symbol, interleaved real/imaginary layout, and a binary cache
//! format with bit-exact reload.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Result, SimError};

const CACHE_MAGIC: &[u8; 4] = b"FLWD";
const CACHE_VERSION: u32 = 1;

/// Windowed input/target pairs for training and inference.
///
/// Each input is a `2*(2M+1) x 2` real matrix stored row-major: column 0
/// carries the x polarization, column 1 the y polarization, and the rows
/// interleave as `[Re(u[-M]), Im(u[-M]), ..., Re(u[+M]), Im(u[+M])]`.
/// Target `i` is `[Re(sx), Im(sx), Re(sy), Im(sy)]` for the symbol at the
/// window center.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowedDataset {
    pub m: usize,
    pub sps: usize,
    /// First target symbol index with full context (windows are emitted
    /// consecutively from here).
    pub first_symbol: usize,
    inputs: Vec<f64>,
    targets: Vec<f64>,
}

impl WindowedDataset {
    /// Rows of one input matrix: 2 * (2M + 1).
    pub fn rows(&self) -> usize {
        2 * (2 * self.m + 1)
    }

    pub fn len(&self) -> usize {
        self.targets.len() / 4
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    /// One input matrix, row-major with 2 columns.
    pub fn input(&self, idx: usize) -> &[f64] {
        let stride = self.rows() * 2;
        &self.inputs[idx * stride..(idx + 1) * stride]
    }

    pub fn target(&self, idx: usize) -> [f64; 4] {
        let t = &self.targets[idx * 4..idx * 4 + 4];
        [t[0], t[1], t[2], t[3]]
    }

    /// Writes the versioned little-endian cache file.
    pub fn save<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        f.write_all(CACHE_MAGIC)?;
        f.write_all(&CACHE_VERSION.to_le_bytes())?;
        for v in [self.m as u64, self.sps as u64, self.first_symbol as u64, self.len() as u64] {
            f.write_all(&v.to_le_bytes())?;
        }
        for v in &self.inputs {
            f.write_all(&v.to_le_bytes())?;
        }
        for v in &self.targets {
            f.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<Self> {
        let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
        let mut magic = [0u8; 4];
        f.read_exact(&mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(SimError::BadFormat("not a window cache file".into()));
        }
        let mut u32b = [0u8; 4];
        f.read_exact(&mut u32b)?;
        let version = u32::from_le_bytes(u32b);
        if version != CACHE_VERSION {
            return Err(SimError::BadFormat(format!("unsupported cache version {version}")));
        }
        let mut u64b = [0u8; 8];
        let mut next = || -> Result<u64> {
            f.read_exact(&mut u64b)?;
            Ok(u64::from_le_bytes(u64b))
        };
        let m = next()? as usize;
        let sps = next()? as usize;
        let first_symbol = next()? as usize;
        let count = next()? as usize;
        let rows = 2 * (2 * m + 1);
        let mut read_f64s = |n: usize| -> Result<Vec<f64>> {
            let mut out = Vec::with_capacity(n);
            let mut b = [0u8; 8];
            for _ in 0..n {
                f.read_exact(&mut b)?;
                out.push(f64::from_le_bytes(b));
            }
            Ok(out)
        };
        let inputs = read_f64s(count * rows * 2)?;
        let targets = read_f64s(count * 4)?;
        Ok(Self { m, sps, first_symbol, inputs, targets })
    }
}

/// Half-window extent in samples: floor(m_bar * sps + (sps - 1) / 2).
pub fn half_window_samples(m_bar: usize, sps: usize) -> usize {
    m_bar * sps + (sps - 1) / 2
}

/// Builds the dataset from a stream pair at `sps` samples per symbol and
/// the ground-truth symbols. Symbol `i` is centered at sample `i * sps`;
/// indices whose window leaves the stream are skipped, not padded.
pub fn extract_windows(
    stream_x: &[Complex64],
    stream_y: &[Complex64],
    syms_x: &[Complex64],
    syms_y: &[Complex64],
    m_bar: usize,
    sps: usize,
) -> Result<WindowedDataset> {
    if m_bar == 0 {
        return Err(SimError::InvalidParameter("channel memory m_bar must be positive".into()));
    }
    if stream_x.len() != stream_y.len() {
        return Err(SimError::LengthMismatch { a: stream_x.len(), b: stream_y.len() });
    }
    if syms_x.len() != syms_y.len() {
        return Err(SimError::LengthMismatch { a: syms_x.len(), b: syms_y.len() });
    }
    let m = half_window_samples(m_bar, sps);
    let window = 2 * m + 1;
    if stream_x.len() <= window {
        return Err(SimError::InvalidParameter(format!(
            "stream of {} samples cannot hold a {window}-sample window",
            stream_x.len()
        )));
    }
    let n_sym = syms_x.len().min(stream_x.len() / sps);
    let first = m.div_ceil(sps);
    let mut inputs = Vec::new();
    let mut targets = Vec::new();
    for i in first..n_sym {
        let center = i * sps;
        if center + m >= stream_x.len() {
            break;
        }
        for k in 0..window {
            let s = center - m + k;
            // Row pair (2k, 2k+1) = Re/Im; columns are the polarizations.
            inputs.push(stream_x[s].re);
            inputs.push(stream_y[s].re);
            inputs.push(stream_x[s].im);
            inputs.push(stream_y[s].im);
        }
        targets.extend_from_slice(&[syms_x[i].re, syms_x[i].im, syms_y[i].re, syms_y[i].im]);
    }
    Ok(WindowedDataset { m, sps, first_symbol: first, inputs, targets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_rng;
    use rand::Rng;

    fn noise_stream(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = seeded_rng(seed);
        (0..n).map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect()
    }

    #[test]
    fn half_window_formula() {
        assert_eq!(half_window_samples(1, 1), 1);
        assert_eq!(half_window_samples(95, 1), 95);
        // floor(190.5) at two samples per symbol
        assert_eq!(half_window_samples(95, 2), 190);
    }

    #[test]
    fn shapes_and_boundary_skipping() {
        let n_sym = 64;
        let sx = noise_stream(n_sym, 1);
        let sy = noise_stream(n_sym, 2);
        let ds = extract_windows(&sx, &sy, &sx, &sy, 1, 1).unwrap();
        assert_eq!(ds.m, 1);
        assert_eq!(ds.rows(), 6);
        // Symbols 0 and 63 lack context: 62 windows remain.
        assert_eq!(ds.len(), n_sym - 2);
        assert_eq!(ds.first_symbol, 1);
    }

    #[test]
    fn interleaving_matches_definition_exactly() {
        let n_sym = 32;
        let sps = 2;
        let stream_x = noise_stream(n_sym * sps, 3);
        let stream_y = noise_stream(n_sym * sps, 4);
        let syms_x = noise_stream(n_sym, 5);
        let syms_y = noise_stream(n_sym, 6);
        let m_bar = 3;
        let ds = extract_windows(&stream_x, &stream_y, &syms_x, &syms_y, m_bar, sps).unwrap();
        let m = half_window_samples(m_bar, sps);
        let idx = 2; // dataset row 2 is symbol first_symbol + 2
        let i = ds.first_symbol + idx;
        let mat = ds.input(idx);
        for k in 0..(2 * m + 1) {
            let s = i * sps - m + k;
            assert_eq!(mat[(2 * k) * 2], stream_x[s].re);
            assert_eq!(mat[(2 * k) * 2 + 1], stream_y[s].re);
            assert_eq!(mat[(2 * k + 1) * 2], stream_x[s].im);
            assert_eq!(mat[(2 * k + 1) * 2 + 1], stream_y[s].im);
        }
        let t = ds.target(idx);
        assert_eq!(t[0], syms_x[i].re);
        assert_eq!(t[3], syms_y[i].im);
    }

    #[test]
    fn zero_memory_is_rejected() {
        let s = noise_stream(16, 7);
        assert!(extract_windows(&s, &s, &s, &s, 0, 1).is_err());
    }

    #[test]
    fn cache_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ds.bin");
        let sx = noise_stream(256, 8);
        let sy = noise_stream(256, 9);
        let tx = noise_stream(128, 10);
        let ty = noise_stream(128, 11);
        let ds = extract_windows(&sx, &sy, &tx, &ty, 5, 2).unwrap();
        ds.save(&path).unwrap();
        let back = WindowedDataset::load(&path).unwrap();
        assert_eq!(ds, back);
        let bytes_a = std::fs::read(&path).unwrap();
        ds.save(&path).unwrap();
        assert_eq!(bytes_a, std::fs::read(&path).unwrap());
    }

    #[test]
    fn rejects_garbage_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("junk.bin");
        std::fs::write(&path, b"not a cache").unwrap();
        assert!(WindowedDataset::load(&path).is_err());
    }
}
