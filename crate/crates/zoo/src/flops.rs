//! Analytic inference complexity: closed-form FLOP counts per layer kind
//! and exact parameter tallies, walked over the same shape chain the
//! builder uses.
//!
//! Conventions. An activation evaluation costs `eta` FLOPs regardless of
//! kind (tanh, sigmoid and ReLU variants are priced identically); the
//! identity/linear activation costs nothing. One inference equalizes the
//! symbols of both polarizations at the window center, so FLOPs per
//! symbol is half the per-inference total.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::arch::{Act, ArchSpec, InputLayout, LayerSpec, HEAD_UNITS};
use crate::error::{Result, ZooError};

/// Activation pricing. `eta` applies to every non-linear activation; a
/// per-layer override replaces it for that hidden-layer index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostModel {
    pub eta: u64,
    #[serde(default)]
    pub overrides: BTreeMap<usize, u64>,
}

impl Default for CostModel {
    fn default() -> Self {
        // Calibrated so the recurrent-family totals land on the published
        // per-symbol counts; exp-based activations are priced well above
        // a multiply-add.
        Self { eta: 15, overrides: BTreeMap::new() }
    }
}

impl CostModel {
    pub fn with_eta(eta: u64) -> Self {
        Self { eta, overrides: BTreeMap::new() }
    }

    fn eta_for(&self, layer_idx: usize, act: Act) -> u64 {
        if act == Act::Linear {
            return 0;
        }
        *self.overrides.get(&layer_idx).unwrap_or(&self.eta)
    }
}

/// FLOPs of one vanilla RNN cell per time step.
pub fn flops_rnn_cell(n_i: u64, n_h: u64, eta: u64) -> u64 {
    n_i * n_h + n_h * n_h + 2 * n_h + eta * n_h
}

/// FLOPs of one LSTM cell per time step.
pub fn flops_lstm_cell(n_i: u64, n_h: u64, eta: u64) -> u64 {
    4 * (n_i * n_h + n_h * n_h + 3 * n_h) + 5 * eta * n_h
}

/// FLOPs of one GRU cell per time step.
pub fn flops_gru_cell(n_i: u64, n_h: u64, eta: u64) -> u64 {
    3 * (n_i * n_h + n_h * n_h + 2 * n_h + eta * n_h) + 5 * n_h
}

/// FLOPs of a fully connected layer.
pub fn flops_fc(n_i: u64, n_h: u64, eta: u64) -> u64 {
    n_i * n_h + eta * n_h + n_h
}

/// Output length of a convolution layer,
/// floor((l_in + 2*pad - (dil*l_ker - 1) - 1)/stride + 1), as printed;
/// the catalog restricts itself to dil = 1 where this matches the
/// standard form.
pub fn conv_out_len(l_in: u64, pad: u64, dil: u64, l_ker: u64, stride: u64) -> Result<u64> {
    let span = dil * l_ker - 1;
    let padded = l_in + 2 * pad;
    if padded < span + 1 || stride == 0 {
        return Err(ZooError::InvalidArchitecture(format!(
            "conv output collapses: l_in={l_in}, pad={pad}, dil={dil}, l_ker={l_ker}, stride={stride}"
        )));
    }
    Ok((padded - span - 1) / stride + 1)
}

/// FLOPs of a convolution layer given its output length.
pub fn flops_conv(n_ker: u64, l_ker: u64, in_ch: u64, l_out: u64, eta: u64) -> u64 {
    let e_ker = l_ker * in_ch;
    let e_out = l_out * n_ker;
    n_ker * (2 * e_ker - 1) * l_out + eta * e_out
}

/// Per-layer cost line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerCost {
    pub index: usize,
    pub kind: String,
    pub params: u64,
    pub flops: u64,
    /// Recurrent layers report their step count, convolutions the output
    /// length; other layers have no time axis.
    pub time_steps: Option<u64>,
}

/// Whole-model cost.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelCost {
    pub params: u64,
    pub flops_per_inference: u64,
    /// Half the per-inference count: each inference recovers the x and y
    /// symbols at the window center.
    pub flops_per_symbol: f64,
    pub layers: Vec<LayerCost>,
}

/// Shape flowing between layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Stage {
    /// (length, channels) map or (steps, features) sequence.
    Map { rows: usize, cols: usize },
    /// Flat feature vector.
    Flat { n: usize },
}

impl Stage {
    pub(crate) fn elements(self) -> usize {
        match self {
            Stage::Map { rows, cols } => rows * cols,
            Stage::Flat { n } => n,
        }
    }
}

/// Shape of the model input for a window of `window_samples` (= 2M+1).
pub(crate) fn input_stage(layout: InputLayout, window_samples: usize) -> Stage {
    match layout {
        InputLayout::Interleaved => Stage::Map { rows: 2 * window_samples, cols: 2 },
        InputLayout::Steps => Stage::Map { rows: window_samples, cols: 4 },
    }
}

/// Walks the layer chain, returning the input stage of every hidden
/// layer plus the final stage feeding the output head.
pub(crate) fn shape_chain(spec: &ArchSpec, window_samples: usize) -> Result<Vec<Stage>> {
    let mut stages = vec![input_stage(spec.input, window_samples)];
    for (i, layer) in spec.layers.iter().enumerate() {
        let cur = *stages.last().expect("non-empty");
        let next = match layer {
            LayerSpec::Fc { units, .. } => Stage::Flat { n: *units },
            LayerSpec::Conv1d { kernels, l_ker, stride, .. } => {
                let Stage::Map { rows, .. } = cur else {
                    return Err(ZooError::ShapeError {
                        layer: i,
                        kind: "conv1d".into(),
                        detail: "convolution needs a (length x channels) map".into(),
                    });
                };
                let l_out = conv_out_len(rows as u64, 0, 1, *l_ker as u64, *stride as u64)
                    .map_err(|e| ZooError::ShapeError {
                        layer: i,
                        kind: "conv1d".into(),
                        detail: e.to_string(),
                    })?;
                Stage::Map { rows: l_out as usize, cols: *kernels }
            }
            LayerSpec::Rnn { units, bidirectional, many_to_one, .. }
            | LayerSpec::Lstm { units, bidirectional, many_to_one }
            | LayerSpec::Gru { units, bidirectional, many_to_one } => {
                let Stage::Map { rows, .. } = cur else {
                    return Err(ZooError::ShapeError {
                        layer: i,
                        kind: "recurrent".into(),
                        detail: "recurrent layers need a (steps x features) sequence".into(),
                    });
                };
                // Bidirectional totals already count both directions, so
                // the per-step output width equals `units` either way.
                if *many_to_one {
                    Stage::Flat { n: *units }
                } else {
                    Stage::Map { rows, cols: *units }
                }
            }
            LayerSpec::Dropout { .. } => cur,
            LayerSpec::Flatten => Stage::Flat { n: cur.elements() },
        };
        stages.push(next);
    }
    Ok(stages)
}

fn recurrent_dims(cur: Stage, units: usize, bidirectional: bool) -> (u64, u64, u64, u64) {
    let Stage::Map { rows, cols } = cur else { unreachable!("validated by shape_chain") };
    let dirs = if bidirectional { 2 } else { 1 };
    let n_h = (units / dirs as usize) as u64;
    (cols as u64, n_h, rows as u64, dirs)
}

/// Analytic parameter and FLOP accounting for the whole model, head
/// included. Time-step counts come from the shape chain, never from the
/// table text.
pub fn model_cost(spec: &ArchSpec, window_samples: usize, cost: &CostModel) -> Result<ModelCost> {
    spec.validate()?;
    let stages = shape_chain(spec, window_samples)?;
    let mut layers = Vec::with_capacity(spec.layers.len() + 1);
    let mut params = 0u64;
    let mut flops = 0u64;
    for (i, layer) in spec.layers.iter().enumerate() {
        let cur = stages[i];
        let (kind, p, f, steps) = match layer {
            LayerSpec::Fc { units, activation } => {
                let n_i = cur.elements() as u64;
                let n_h = *units as u64;
                (
                    "fc",
                    n_h * (n_i + 1),
                    flops_fc(n_i, n_h, cost.eta_for(i, *activation)),
                    None,
                )
            }
            LayerSpec::Conv1d { kernels, l_ker, stride: _, activation } => {
                let Stage::Map { cols: in_ch, .. } = cur else { unreachable!() };
                let Stage::Map { rows: l_out, .. } = stages[i + 1] else { unreachable!() };
                let n_ker = *kernels as u64;
                let p = n_ker * ((*l_ker * in_ch) as u64 + 1);
                let f = flops_conv(
                    n_ker,
                    *l_ker as u64,
                    in_ch as u64,
                    l_out as u64,
                    cost.eta_for(i, *activation),
                );
                ("conv1d", p, f, Some(l_out as u64))
            }
            LayerSpec::Rnn { units, activation, bidirectional, .. } => {
                let (n_i, n_h, t, dirs) = recurrent_dims(cur, *units, *bidirectional);
                let p = dirs * (n_h * n_i + n_h * n_h + n_h);
                let f = dirs * t * flops_rnn_cell(n_i, n_h, cost.eta_for(i, *activation));
                ("rnn", p, f, Some(t))
            }
            LayerSpec::Lstm { units, bidirectional, .. } => {
                let (n_i, n_h, t, dirs) = recurrent_dims(cur, *units, *bidirectional);
                let p = dirs * 4 * (n_h * n_i + n_h * n_h + n_h);
                let f = dirs * t * flops_lstm_cell(n_i, n_h, cost.eta_for(i, Act::Tanh));
                ("lstm", p, f, Some(t))
            }
            LayerSpec::Gru { units, bidirectional, .. } => {
                let (n_i, n_h, t, dirs) = recurrent_dims(cur, *units, *bidirectional);
                let p = dirs * 3 * (n_h * n_i + n_h * n_h + n_h);
                let f = dirs * t * flops_gru_cell(n_i, n_h, cost.eta_for(i, Act::Tanh));
                ("gru", p, f, Some(t))
            }
            LayerSpec::Dropout { .. } => ("dropout", 0, 0, None),
            LayerSpec::Flatten => ("flatten", 0, 0, None),
        };
        params += p;
        flops += f;
        layers.push(LayerCost { index: i, kind: kind.into(), params: p, flops: f, time_steps: steps });
    }
    // Output head: linear FC with 4 units.
    let head_in = stages.last().expect("non-empty").elements() as u64;
    let head_params = HEAD_UNITS as u64 * (head_in + 1);
    let head_flops = flops_fc(head_in, HEAD_UNITS as u64, 0);
    params += head_params;
    flops += head_flops;
    layers.push(LayerCost {
        index: spec.layers.len(),
        kind: "fc_head".into(),
        params: head_params,
        flops: head_flops,
        time_steps: None,
    });
    Ok(ModelCost {
        params,
        flops_per_inference: flops,
        flops_per_symbol: flops as f64 / 2.0,
        layers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rnn_cell_formula_examples() {
        assert_eq!(flops_rnn_cell(2, 3, 0), 21);
        assert_eq!(flops_rnn_cell(1, 1, 0), 4);
        assert_eq!(flops_rnn_cell(1, 1, 1), 5);
    }

    #[test]
    fn gated_cell_formula_examples() {
        assert_eq!(flops_lstm_cell(1, 1, 1), 25);
        assert_eq!(flops_gru_cell(1, 1, 1), 20);
        assert_eq!(flops_gru_cell(2, 3, 0), 78);
    }

    #[test]
    fn fc_formula_examples() {
        assert_eq!(flops_fc(10, 4, 2), 52);
        assert_eq!(flops_fc(1, 1, 0), 2);
        assert_eq!(flops_fc(454, 4, 0), 1820);
    }

    #[test]
    fn conv_formulas() {
        assert_eq!(conv_out_len(100, 0, 1, 9, 9).unwrap(), 11);
        assert_eq!(conv_out_len(9, 0, 1, 9, 9).unwrap(), 1);
        assert!(conv_out_len(8, 0, 1, 9, 1).is_err());
        // 458-sample map, 49-tap kernel over 2 channels, 4 kernels.
        let l_out = conv_out_len(458, 0, 1, 49, 1).unwrap();
        assert_eq!(l_out, 410);
        assert_eq!(flops_conv(4, 49, 2, l_out, 0), 319_800);
    }

    #[test]
    fn cell_cost_ordering_holds_everywhere() {
        for n_i in 1..12u64 {
            for n_h in 1..12u64 {
                for eta in [0u64, 1, 4, 15] {
                    let r = flops_rnn_cell(n_i, n_h, eta);
                    let g = flops_gru_cell(n_i, n_h, eta);
                    let l = flops_lstm_cell(n_i, n_h, eta);
                    assert!(l > g && g > r, "ni={n_i} nh={n_h} eta={eta}");
                }
            }
        }
    }
}
