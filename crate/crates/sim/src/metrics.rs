//! Link quality metrics: bit error rate, Q-factor, error vector
//! magnitude, and constellation export.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Result, SimError};

/// Fraction of mismatched bits.
pub fn ber(tx_bits: &[u8], rx_bits: &[u8]) -> Result<f64> {
    if tx_bits.len() != rx_bits.len() {
        return Err(SimError::LengthMismatch { a: tx_bits.len(), b: rx_bits.len() });
    }
    if tx_bits.is_empty() {
        return Err(SimError::InvalidParameter("cannot compute BER over zero bits".into()));
    }
    let errors = tx_bits.iter().zip(rx_bits).filter(|(a, b)| a != b).count();
    Ok(errors as f64 / tx_bits.len() as f64)
}

/// Q-factor in dB: 20*log10(sqrt(2) * erfc_inv(2*ber)).
///
/// Defined only for ber in (0, 0.5); counted-zero or inverted BERs are
/// reported as undefined and the harness records "n/a".
pub fn q_factor(ber: f64) -> Result<f64> {
    if !(ber > 0.0 && ber < 0.5) {
        return Err(SimError::QFactorUndefined(ber));
    }
    Ok(20.0 * (std::f64::consts::SQRT_2 * erfc_inv(2.0 * ber)).log10())
}

/// erf by Taylor series; accurate to ~1e-16 for |x| <= 1.5.
fn erf_series(x: f64) -> f64 {
    let two_over_sqrt_pi = 1.128_379_167_095_512_6;
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0u32;
    loop {
        n += 1;
        term *= -x2 / n as f64;
        let contrib = term / (2 * n + 1) as f64;
        sum += contrib;
        if contrib.abs() < 1e-18 * sum.abs().max(1e-300) || n > 200 {
            break;
        }
    }
    two_over_sqrt_pi * sum
}

/// erfc by the Laplace continued fraction (modified Lentz); for x >= 1.5.
///
/// erfc(x) * sqrt(pi) * exp(x^2) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
fn erfc_cf(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = tiny;
    let mut c = f;
    let mut d = 0.0;
    for j in 1..=200u32 {
        let a = if j == 1 { 1.0 } else { (j - 1) as f64 / 2.0 };
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-17 {
            break;
        }
    }
    let inv_sqrt_pi = 0.564_189_583_547_756_3;
    inv_sqrt_pi * (-x * x).exp() * f
}

/// Complementary error function, |relative error| below ~1e-14.
pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 1.5 {
        1.0 - erf_series(x)
    } else {
        erfc_cf(x)
    }
}

/// Rational approximation to the standard normal quantile (maximum
/// relative error around 1e-15 over (0,1)); used to seed the Newton
/// refinement of [`erfc_inv`].
fn normal_quantile(p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        let num = q
            * (((((((2.509_080_928_730_122_7e3 * r + 3.343_057_558_358_813e4) * r
                + 6.726_577_092_700_87e4)
                * r
                + 4.592_195_393_154_987e4)
                * r
                + 1.373_716_378_158_231e4)
                * r
                + 1.971_590_950_306_551_3e3)
                * r
                + 1.331_416_678_917_843_8e2)
                * r
                + 3.387_132_872_796_366_5);
        let den = ((((((5.226_495_278_852_545_4e3 * r + 2.872_908_573_572_194_3e4) * r
            + 3.930_789_580_009_271e4)
            * r
            + 2.121_379_430_158_659_7e4)
            * r
            + 5.394_196_021_424_751e3)
            * r
            + 6.871_870_074_920_579e2)
            * r
            + 4.231_333_070_160_091e1)
            * r
            + 1.0;
        return num / den;
    }
    let r = if q < 0.0 { p } else { 1.0 - p };
    let mut r = (-r.ln()).sqrt();
    let val = if r <= 5.0 {
        r -= 1.6;
        let num = ((((((7.745_450_142_783_414e-4 * r + 2.272_384_498_926_918_4e-2) * r
            + 2.417_807_251_774_506e-1)
            * r
            + 1.270_458_252_452_368_4)
            * r
            + 3.647_848_324_763_204_5)
            * r
            + 5.769_497_221_460_691)
            * r
            + 4.630_337_846_156_546)
            * r
            + 1.423_437_110_749_683_5;
        let den = ((((((1.050_750_071_644_416_9e-9 * r + 5.475_938_084_995_345e-4) * r
            + 1.519_866_656_361_645_7e-2)
            * r
            + 1.481_039_764_274_800_8e-1)
            * r
            + 6.897_673_349_851e-1)
            * r
            + 1.676_384_830_183_803_8)
            * r
            + 2.053_191_626_637_759)
            * r
            + 1.0;
        num / den
    } else {
        r -= 5.0;
        let num = ((((((2.010_334_399_292_288_1e-7 * r + 2.711_555_568_743_487_6e-5) * r
            + 1.242_660_947_388_078_4e-3)
            * r
            + 2.653_218_952_657_612_4e-2)
            * r
            + 2.965_605_718_285_048_7e-1)
            * r
            + 1.784_826_539_917_291_3)
            * r
            + 5.463_784_911_164_114)
            * r
            + 6.657_904_643_501_103;
        let den = ((((((2.044_263_103_389_939_7e-15 * r + 1.421_511_758_316_446e-7) * r
            + 1.846_318_317_510_054_8e-5)
            * r
            + 7.868_691_311_456_133e-4)
            * r
            + 1.487_536_129_085_061_5e-2)
            * r
            + 1.369_298_809_227_358e-1)
            * r
            + 5.998_322_065_558_88e-1)
            * r
            + 1.0;
        num / den
    };
    if q < 0.0 {
        -val
    } else {
        val
    }
}

/// Inverse complementary error function on (0, 2).
///
/// A rational initial guess (via the normal quantile) is polished with
/// two Newton iterations on erfc itself; the accompanying oracle test
/// gates the relative error below 1e-10.
pub fn erfc_inv(q: f64) -> f64 {
    assert!(q > 0.0 && q < 2.0, "erfc_inv domain is (0, 2), got {q}");
    // erfc(x) = 2*Phi(-x*sqrt(2)) => x = -Phi^{-1}(q/2)/sqrt(2)
    let mut x = -normal_quantile(q / 2.0) / std::f64::consts::SQRT_2;
    let sqrt_pi_over_2 = 0.886_226_925_452_758;
    for _ in 0..2 {
        let err = erfc(x) - q;
        // d/dx erfc = -2/sqrt(pi) * exp(-x^2)
        x += err * sqrt_pi_over_2 * (x * x).exp();
    }
    x
}

/// Error vector magnitude in dB: 10*log10(mean|e - r|^2 / mean|r|^2).
/// Exact matches return the -300 dB sentinel instead of -inf.
pub fn evm_db(est: &[Complex64], reference: &[Complex64]) -> Result<f64> {
    if est.len() != reference.len() {
        return Err(SimError::LengthMismatch { a: est.len(), b: reference.len() });
    }
    if est.is_empty() {
        return Err(SimError::InvalidParameter("cannot compute EVM over zero symbols".into()));
    }
    let num: f64 = est.iter().zip(reference).map(|(e, r)| (e - r).norm_sqr()).sum();
    let den: f64 = reference.iter().map(|r| r.norm_sqr()).sum();
    let ratio = num / den;
    if ratio < 1e-30 {
        return Ok(-300.0);
    }
    Ok(10.0 * ratio.log10())
}

/// Writes symbols as `re,im` CSV lines with round-trip-exact floats.
pub fn constellation_dump<P: AsRef<Path>>(syms: &[Complex64], path: P) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "re,im")?;
    for s in syms {
        writeln!(f, "{},{}", s.re, s.im)?;
    }
    Ok(())
}

/// One sweep-point outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub launch_power_dbm: f64,
    pub equalizer: String,
    pub ber: f64,
    pub q_factor_db: Option<f64>,
    pub n_bits: usize,
    pub seed: u64,
}

impl ResultRow {
    pub fn new(
        launch_power_dbm: f64,
        equalizer: impl Into<String>,
        raw_ber: f64,
        n_bits: usize,
        seed: u64,
    ) -> Self {
        let ber = raw_ber.clamp(0.0, 0.5);
        Self {
            launch_power_dbm,
            equalizer: equalizer.into(),
            ber,
            q_factor_db: q_factor(ber).ok(),
            n_bits,
            seed,
        }
    }

    pub fn csv_header() -> &'static str {
        "power_dbm,equalizer,ber,q_factor_db,n_bits,seed"
    }

    pub fn to_csv_line(&self) -> String {
        let q = match self.q_factor_db {
            Some(v) => format!("{v}"),
            None => "n/a".to_string(),
        };
        format!(
            "{},{},{},{},{},{}",
            self.launch_power_dbm, self.equalizer, self.ber, q, self.n_bits, self.seed
        )
    }
}
