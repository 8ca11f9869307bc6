//! Declarative architecture descriptions with one canonical text
//! serialization (TOML). The same description drives both model building
//! and complexity counting.

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZooError};

/// How the window matrix (2*(2M+1) x 2) enters the first layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputLayout {
    /// Interleaved Re/Im rows with one column per polarization; feeds
    /// convolutional fronts as a length-2(2M+1), 2-channel map.
    Interleaved,
    /// One time step per symbol slot with 4 features
    /// [Re_x, Im_x, Re_y, Im_y]; feeds recurrent fronts.
    Steps,
}

/// Activation names used by the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Act {
    Tanh,
    Sigmoid,
    Relu,
    LeakyRelu,
    Linear,
}

/// One hidden layer. Unit counts of bidirectional layers are totals over
/// both directions (half per direction), matching how the published
/// tables quote them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[serde(deny_unknown_fields)]
pub enum LayerSpec {
    Fc { units: usize, activation: Act },
    Conv1d { kernels: usize, l_ker: usize, stride: usize, activation: Act },
    Rnn { units: usize, activation: Act, bidirectional: bool, many_to_one: bool },
    Lstm { units: usize, bidirectional: bool, many_to_one: bool },
    Gru { units: usize, bidirectional: bool, many_to_one: bool },
    Dropout { rate: f64 },
    Flatten,
}

/// Ordered layer stack for one receiver mode. Every model ends in the
/// fixed output head: a linear fully connected layer with 4 units
/// producing Re/Im of the two equalized symbols; the head is implicit
/// and appended by the builder and the cost model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchSpec {
    pub name: String,
    pub rx_mode: u8,
    pub input: InputLayout,
    pub layers: Vec<LayerSpec>,
}

/// Units of the output head.
pub const HEAD_UNITS: usize = 4;

impl ArchSpec {
    pub fn validate(&self) -> Result<()> {
        if self.rx_mode != 1 && self.rx_mode != 2 {
            return Err(ZooError::InvalidArchitecture(format!(
                "rx_mode must be 1 or 2, got {}",
                self.rx_mode
            )));
        }
        if self.layers.is_empty() {
            return Err(ZooError::InvalidArchitecture("no hidden layers".into()));
        }
        for (i, layer) in self.layers.iter().enumerate() {
            match layer {
                LayerSpec::Conv1d { kernels, l_ker, stride, .. } => {
                    if *kernels == 0 || *l_ker == 0 || *stride == 0 {
                        return Err(ZooError::InvalidArchitecture(format!(
                            "layer {i}: conv dimensions must be positive"
                        )));
                    }
                }
                LayerSpec::Fc { units, .. } if *units == 0 => {
                    return Err(ZooError::InvalidArchitecture(format!("layer {i}: zero units")));
                }
                LayerSpec::Rnn { units, bidirectional, .. }
                | LayerSpec::Lstm { units, bidirectional, .. }
                | LayerSpec::Gru { units, bidirectional, .. } => {
                    if *units == 0 {
                        return Err(ZooError::InvalidArchitecture(format!("layer {i}: zero units")));
                    }
                    if *bidirectional && units % 2 != 0 {
                        return Err(ZooError::InvalidArchitecture(format!(
                            "layer {i}: bidirectional unit total {units} must be even"
                        )));
                    }
                }
                LayerSpec::Dropout { rate } => {
                    if !(0.0..1.0).contains(rate) {
                        return Err(ZooError::InvalidArchitecture(format!(
                            "layer {i}: dropout rate {rate} outside [0, 1)"
                        )));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Replaces the unit count of the single recurrent layer; the knob
    /// behind gain-versus-units sweeps.
    pub fn with_units(&self, units: usize) -> Result<ArchSpec> {
        let mut out = self.clone();
        let mut hits = 0usize;
        for layer in &mut out.layers {
            match layer {
                LayerSpec::Rnn { units: u, bidirectional, .. }
                | LayerSpec::Lstm { units: u, bidirectional, .. }
                | LayerSpec::Gru { units: u, bidirectional, .. } => {
                    if *bidirectional && units % 2 != 0 {
                        return Err(ZooError::InvalidArchitecture(format!(
                            "bidirectional unit total {units} must be even"
                        )));
                    }
                    *u = units;
                    hits += 1;
                }
                _ => {}
            }
        }
        if hits != 1 {
            return Err(ZooError::NotScalable(format!(
                "{} has {hits} recurrent layers",
                self.name
            )));
        }
        Ok(out)
    }

    /// Canonical text form.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| ZooError::Serialization(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<ArchSpec> {
        let spec: ArchSpec =
            toml::from_str(text).map_err(|e| ZooError::Serialization(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ArchSpec {
        ArchSpec {
            name: "crnn".into(),
            rx_mode: 1,
            input: InputLayout::Interleaved,
            layers: vec![
                LayerSpec::Conv1d { kernels: 4, l_ker: 49, stride: 1, activation: Act::Relu },
                LayerSpec::Rnn {
                    units: 454,
                    activation: Act::Tanh,
                    bidirectional: false,
                    many_to_one: true,
                },
            ],
        }
    }

    #[test]
    fn toml_round_trip() {
        let spec = sample();
        let text = spec.to_toml().unwrap();
        let back = ArchSpec::from_toml(&text).unwrap();
        assert_eq!(spec, back);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = sample().to_toml().unwrap() + "\nbogus_key = 3\n";
        assert!(ArchSpec::from_toml(&text).is_err());
    }

    #[test]
    fn unit_scaling_replaces_the_recurrent_layer() {
        let spec = sample();
        let scaled = spec.with_units(96).unwrap();
        match &scaled.layers[1] {
            LayerSpec::Rnn { units, .. } => assert_eq!(*units, 96),
            _ => panic!(),
        }
        let odd_bi = ArchSpec {
            layers: vec![LayerSpec::Lstm { units: 10, bidirectional: true, many_to_one: false }],
            ..sample()
        };
        assert!(odd_bi.with_units(7).is_err());
    }

    #[test]
    fn validation_catches_bad_dropout_and_odd_bidirectional() {
        let mut spec = sample();
        spec.layers.push(LayerSpec::Dropout { rate: 1.5 });
        assert!(spec.validate().is_err());
        let mut spec = sample();
        spec.layers[1] =
            LayerSpec::Rnn { units: 3, activation: Act::Tanh, bidirectional: true, many_to_one: false };
        assert!(spec.validate().is_err());
    }
}
