//! Experiment configuration: one canonical TOML file with strict keys,
//! plus the two shipped profiles (desk and full scale).

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use fiberlab_sim::SystemParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub baud_rate_hz: f64,
    pub loss_db_per_km: f64,
    pub dispersion_ps_nm_km: f64,
    /// Kerr coefficient in 1/(W*km).
    pub gamma_per_w_km: f64,
    pub pmd_ps_sqrt_km: f64,
    pub span_km: f64,
    pub n_spans: usize,
    pub sps_forward: usize,
    pub sps_rx: usize,
    pub steps_per_span: usize,
    pub linewidth_hz: f64,
    pub noise_figure_db: f64,
    pub rolloff: f64,
    pub center_wavelength_nm: f64,
    pub rrc_span_symbols: usize,
    /// Impairment switches for oracle runs.
    pub phase_noise_on: bool,
    pub pmd_on: bool,
    pub ase_on: bool,
}

impl SystemConfig {
    pub fn to_params(&self) -> SystemParams {
        let lambda = self.center_wavelength_nm * 1e-9;
        SystemParams {
            alpha: SystemParams::alpha_from_db_per_km(self.loss_db_per_km),
            beta2: SystemParams::beta2_from_dispersion(self.dispersion_ps_nm_km, lambda),
            gamma: self.gamma_per_w_km * 1e-3,
            pmd_coef: self.pmd_ps_sqrt_km * 1e-12 / 1000f64.sqrt(),
            span_length: self.span_km * 1e3,
            n_spans: self.n_spans,
            sps_forward: self.sps_forward,
            sps_rx: self.sps_rx,
            steps_per_span: self.steps_per_span,
            linewidth: if self.phase_noise_on { self.linewidth_hz } else { 0.0 },
            noise_figure_db: self.noise_figure_db,
            rolloff: self.rolloff,
            center_wavelength: lambda,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub rx_mode: u8,
    /// "linear", "dbp:<steps>", or "nn:<catalog name or arch file path>".
    pub equalizers: Vec<String>,
    pub powers_dbm: Vec<f64>,
    pub n_train_symbols: usize,
    pub n_test_bits: usize,
    pub pilot_symbols: usize,
    pub edge_trim_symbols: usize,
    pub seed: u64,
    /// Which catalog scale backs `nn:<name>` equalizers.
    pub model_scale: ModelScale,
    /// Channel-memory overrides per model name.
    #[serde(default)]
    pub mbar_override: BTreeMap<String, usize>,
    /// Reuse the previous power's weights as initialization.
    #[serde(default)]
    pub warm_start: bool,
    /// Reuse cached windowed datasets when the config hash matches.
    #[serde(default)]
    pub use_cache: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelScale {
    Desk,
    Paper,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainingConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub val_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlopsConfig {
    pub eta: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub system: SystemConfig,
    pub run: RunConfig,
    pub training: TrainingConfig,
    pub flops: FlopsConfig,
}

impl ExperimentConfig {
    /// Desk-scale default: a short link at reduced baud with noise loading
    /// (raised amplifier noise figure) so the BER floor stays countable;
    /// trains in minutes.
    pub fn desk() -> Self {
        Self {
            system: SystemConfig {
                baud_rate_hz: 32e9,
                loss_db_per_km: 0.2,
                dispersion_ps_nm_km: 17.0,
                gamma_per_w_km: 1.4,
                pmd_ps_sqrt_km: 0.2,
                span_km: 80.0,
                n_spans: 4,
                sps_forward: 4,
                sps_rx: 2,
                steps_per_span: 40,
                linewidth_hz: 100e3,
                noise_figure_db: 13.0,
                rolloff: 0.25,
                center_wavelength_nm: 1550.0,
                rrc_span_symbols: 32,
                phase_noise_on: true,
                pmd_on: true,
                ase_on: true,
            },
            run: RunConfig {
                rx_mode: 1,
                equalizers: vec![
                    "linear".into(),
                    "dbp:2".into(),
                    "dbp:40".into(),
                    "nn:crnn".into(),
                ],
                powers_dbm: vec![-4.0, -2.0, 0.0, 2.0, 4.0, 6.0, 8.0],
                n_train_symbols: 1 << 14,
                n_test_bits: 1 << 17,
                pilot_symbols: 256,
                edge_trim_symbols: 192,
                seed: 1,
                model_scale: ModelScale::Desk,
                mbar_override: BTreeMap::new(),
                warm_start: false,
                use_cache: false,
            },
            training: TrainingConfig {
                epochs: 30,
                batch_size: 16,
                learning_rate: 5e-4,
                beta1: 0.85,
                beta2: 0.999,
                val_fraction: 0.1,
            },
            flops: FlopsConfig { eta: 15 },
        }
    }

    /// Full-scale profile mirroring the published system. Compute-heavy:
    /// propagation and training at this scale take many hours.
    pub fn paper() -> Self {
        let mut cfg = Self::desk();
        cfg.system.baud_rate_hz = 64e9;
        cfg.system.n_spans = 14;
        cfg.system.sps_forward = 8;
        cfg.system.steps_per_span = 80;
        cfg.system.noise_figure_db = 5.0;
        cfg.system.pmd_ps_sqrt_km = 0.05;
        cfg.run.equalizers =
            vec!["linear".into(), "dbp:2".into(), "dbp:80".into(), "nn:crnn".into()];
        cfg.run.powers_dbm = vec![-5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0, 9.0, 11.0];
        cfg.run.n_train_symbols = 1 << 18;
        cfg.run.n_test_bits = 1 << 24;
        cfg.run.model_scale = ModelScale::Paper;
        cfg.run.edge_trim_symbols = 512;
        cfg.training.epochs = 120;
        cfg
    }

    pub fn load<P: AsRef<Path>>(path: P) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        let cfg: ExperimentConfig = toml::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.run.powers_dbm.is_empty() {
            anyhow::bail!("power sweep must not be empty");
        }
        if self.run.rx_mode != 1 && self.run.rx_mode != 2 {
            anyhow::bail!("rx_mode must be 1 or 2");
        }
        if self.run.n_test_bits % 8 != 0 {
            anyhow::bail!("n_test_bits must be a multiple of 8 (bits per dual-pol symbol)");
        }
        for eq in &self.run.equalizers {
            parse_equalizer(eq)?;
        }
        self.system.to_params().validate()?;
        Ok(())
    }
}

/// Parsed equalizer selector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equalizer {
    Linear,
    Dbp { steps_per_span: usize },
    Nn { arch: String },
}

impl Equalizer {
    pub fn label(&self) -> String {
        match self {
            Equalizer::Linear => "linear".into(),
            Equalizer::Dbp { steps_per_span } => format!("dbp{steps_per_span}"),
            Equalizer::Nn { arch } => format!("nn_{arch}"),
        }
    }
}

pub fn parse_equalizer(text: &str) -> anyhow::Result<Equalizer> {
    if text == "linear" {
        return Ok(Equalizer::Linear);
    }
    if let Some(steps) = text.strip_prefix("dbp:") {
        let steps_per_span: usize = steps.parse()?;
        if steps_per_span == 0 {
            anyhow::bail!("dbp steps must be positive");
        }
        return Ok(Equalizer::Dbp { steps_per_span });
    }
    if let Some(arch) = text.strip_prefix("nn:") {
        return Ok(Equalizer::Nn { arch: arch.to_string() });
    }
    anyhow::bail!("unknown equalizer '{text}' (expected linear, dbp:<steps> or nn:<arch>)")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles_validate() {
        ExperimentConfig::desk().validate().unwrap();
        ExperimentConfig::paper().validate().unwrap();
    }

    #[test]
    fn toml_round_trip() {
        let cfg = ExperimentConfig::desk();
        let text = cfg.to_toml();
        let back: ExperimentConfig = toml::from_str(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = ExperimentConfig::desk().to_toml() + "\n[extra]\nfoo = 1\n";
        assert!(toml::from_str::<ExperimentConfig>(&text).is_err());
        let text = ExperimentConfig::desk().to_toml().replace("rolloff", "rolloaf");
        assert!(toml::from_str::<ExperimentConfig>(&text).is_err());
    }

    #[test]
    fn equalizer_parsing() {
        assert_eq!(parse_equalizer("linear").unwrap(), Equalizer::Linear);
        assert_eq!(parse_equalizer("dbp:80").unwrap(), Equalizer::Dbp { steps_per_span: 80 });
        assert_eq!(parse_equalizer("nn:crnn").unwrap(), Equalizer::Nn { arch: "crnn".into() });
        assert!(parse_equalizer("volterra").is_err());
        assert!(parse_equalizer("dbp:0").is_err());
    }
}
