//! ArchSpec to executable network: seeded initialization over the same
//! shape chain the cost model walks.

use fiberlab_nn::activation::Activation;
use fiberlab_nn::init::{glorot_uniform, orthogonal};
use fiberlab_nn::layers::{
    Conv1d, Dense, Dropout, Gru, GruCellParams, Lstm, LstmCellParams, Rnn, RnnCellParams,
};
use fiberlab_nn::model::{Layer, Model};
use fiberlab_nn::Tensor;
use fiberlab_sim::rng::{derive_seed, seeded_rng};
use rand_chacha::ChaCha8Rng;

use crate::arch::{Act, ArchSpec, InputLayout, LayerSpec, HEAD_UNITS};
use crate::error::Result;
use crate::flops::{shape_chain, Stage};

fn act(a: Act) -> Activation {
    match a {
        Act::Tanh => Activation::Tanh,
        Act::Sigmoid => Activation::Sigmoid,
        Act::Relu => Activation::Relu,
        Act::LeakyRelu => Activation::LeakyRelu,
        Act::Linear => Activation::Linear,
    }
}

fn rnn_cell(n_h: usize, n_i: usize, rng: &mut ChaCha8Rng) -> RnnCellParams {
    RnnCellParams {
        w_x: glorot_uniform(n_h, n_i, n_i, n_h, rng),
        w_h: orthogonal(n_h, rng),
        b_h: vec![0.0; n_h],
    }
}

fn lstm_cell(n_h: usize, n_i: usize, rng: &mut ChaCha8Rng) -> LstmCellParams {
    LstmCellParams {
        w_cx: glorot_uniform(n_h, n_i, n_i, n_h, rng),
        w_ch: orthogonal(n_h, rng),
        b_c: vec![0.0; n_h],
        w_ux: glorot_uniform(n_h, n_i, n_i, n_h, rng),
        w_uh: orthogonal(n_h, rng),
        b_u: vec![0.0; n_h],
        w_fx: glorot_uniform(n_h, n_i, n_i, n_h, rng),
        w_fh: orthogonal(n_h, rng),
        b_f: vec![0.0; n_h],
        w_ox: glorot_uniform(n_h, n_i, n_i, n_h, rng),
        w_oh: orthogonal(n_h, rng),
        b_o: vec![0.0; n_h],
    }
}

fn gru_cell(n_h: usize, n_i: usize, rng: &mut ChaCha8Rng) -> GruCellParams {
    GruCellParams {
        w_cx: glorot_uniform(n_h, n_i, n_i, n_h, rng),
        w_cc: orthogonal(n_h, rng),
        b_c: vec![0.0; n_h],
        w_ux: glorot_uniform(n_h, n_i, n_i, n_h, rng),
        w_uc: orthogonal(n_h, rng),
        b_u: vec![0.0; n_h],
        w_rx: glorot_uniform(n_h, n_i, n_i, n_h, rng),
        w_rc: orthogonal(n_h, rng),
        b_r: vec![0.0; n_h],
    }
}

/// Instantiates the executable model for a window of `window_samples`
/// (that is 2M+1 samples). Initialization is Glorot-uniform for
/// feedforward weights, orthogonal for recurrent state matrices, and
/// zero biases, each layer on its own stream of `seed`.
pub fn build(spec: &ArchSpec, window_samples: usize, seed: u64) -> Result<Model> {
    spec.validate()?;
    let stages = shape_chain(spec, window_samples)?;
    let mut layers = Vec::new();
    if spec.input == InputLayout::Steps {
        layers.push(Layer::ToSteps);
    }
    for (i, layer_spec) in spec.layers.iter().enumerate() {
        let mut rng = seeded_rng(derive_seed(seed, 0x1a7e0 + i as u64));
        let cur = stages[i];
        let layer = match layer_spec {
            LayerSpec::Fc { units, activation } => {
                let n_i = cur.elements();
                // An implicit flatten precedes dense layers; Dense itself
                // flattens, so only emit the real layer.
                Layer::Dense(Dense {
                    w: glorot_uniform(*units, n_i, n_i, *units, &mut rng),
                    b: vec![0.0; *units],
                    act: act(*activation),
                })
            }
            LayerSpec::Conv1d { kernels, l_ker, stride, activation } => {
                let Stage::Map { cols: in_ch, .. } = cur else { unreachable!("shape-checked") };
                let fan_in = l_ker * in_ch;
                let w = glorot_uniform(*kernels, fan_in, fan_in, *kernels, &mut rng);
                Layer::Conv1d(Conv1d {
                    kernels: w.as_slice().to_vec(),
                    bias: vec![0.0; *kernels],
                    n_ker: *kernels,
                    l_ker: *l_ker,
                    in_ch,
                    stride: *stride,
                    act: act(*activation),
                })
            }
            LayerSpec::Rnn { units, activation, bidirectional, many_to_one } => {
                let Stage::Map { cols: n_i, .. } = cur else { unreachable!("shape-checked") };
                let n_h = units / if *bidirectional { 2 } else { 1 };
                Layer::Rnn(Rnn {
                    fwd: rnn_cell(n_h, n_i, &mut rng),
                    bwd: bidirectional.then(|| rnn_cell(n_h, n_i, &mut rng)),
                    act: act(*activation),
                    many_to_one: *many_to_one,
                    out_map: None,
                })
            }
            LayerSpec::Lstm { units, bidirectional, many_to_one } => {
                let Stage::Map { cols: n_i, .. } = cur else { unreachable!("shape-checked") };
                let n_h = units / if *bidirectional { 2 } else { 1 };
                Layer::Lstm(Lstm {
                    fwd: lstm_cell(n_h, n_i, &mut rng),
                    bwd: bidirectional.then(|| lstm_cell(n_h, n_i, &mut rng)),
                    many_to_one: *many_to_one,
                })
            }
            LayerSpec::Gru { units, bidirectional, many_to_one } => {
                let Stage::Map { cols: n_i, .. } = cur else { unreachable!("shape-checked") };
                let n_h = units / if *bidirectional { 2 } else { 1 };
                Layer::Gru(Gru {
                    fwd: gru_cell(n_h, n_i, &mut rng),
                    bwd: bidirectional.then(|| gru_cell(n_h, n_i, &mut rng)),
                    many_to_one: *many_to_one,
                })
            }
            LayerSpec::Dropout { rate } => Layer::Dropout(Dropout { rate: *rate }),
            LayerSpec::Flatten => Layer::Flatten,
        };
        layers.push(layer);
    }
    // Output head.
    let head_in = stages.last().expect("non-empty").elements();
    let mut rng = seeded_rng(derive_seed(seed, 0x1a7e0 + spec.layers.len() as u64));
    layers.push(Layer::Dense(Dense {
        w: glorot_uniform(HEAD_UNITS, head_in, head_in, HEAD_UNITS, &mut rng),
        b: vec![0.0; HEAD_UNITS],
        act: Activation::Linear,
    }));
    Ok(Model::new(layers))
}

/// Input tensor for one dataset window: the raw (2*(2M+1) x 2) matrix.
/// Layout adaptation happens inside the model.
pub fn window_tensor(rows: usize, data: &[f64]) -> Tensor {
    Tensor::from_vec(rows, 2, data.to_vec())
}
