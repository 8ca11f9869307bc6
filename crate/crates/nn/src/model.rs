//! Layer composition, forward/backward driving, and parameter access in
//! one canonical order shared by the optimizer and the checkpoint format.

use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::layers::{
    flatten, to_steps, to_steps_backward, Conv1d, Conv1dCache, Dense, DenseCache, Dropout,
    DropoutCache, Gru, GruCache, Lstm, LstmCache, Rnn, RnnCache,
};
use crate::tensor::Tensor;

#[derive(Debug, Clone, PartialEq)]
pub enum Layer {
    Dense(Dense),
    Conv1d(Conv1d),
    Rnn(Rnn),
    Lstm(Lstm),
    Gru(Gru),
    Dropout(Dropout),
    Flatten,
    /// Window matrix (2*(2M+1) x 2) to per-symbol time steps (2M+1 x 4).
    ToSteps,
}

impl Layer {
    pub fn kind(&self) -> &'static str {
        match self {
            Layer::Dense(_) => "fc",
            Layer::Conv1d(_) => "conv1d",
            Layer::Rnn(_) => "rnn",
            Layer::Lstm(_) => "lstm",
            Layer::Gru(_) => "gru",
            Layer::Dropout(_) => "dropout",
            Layer::Flatten => "flatten",
            Layer::ToSteps => "to_steps",
        }
    }

    pub fn n_params(&self) -> usize {
        match self {
            Layer::Dense(l) => l.n_params(),
            Layer::Conv1d(l) => l.n_params(),
            Layer::Rnn(l) => l.n_params(),
            Layer::Lstm(l) => l.n_params(),
            Layer::Gru(l) => l.n_params(),
            _ => 0,
        }
    }

    /// Parameter tensors in canonical order: (name, rows, cols).
    pub fn param_meta(&self) -> Vec<(String, usize, usize)> {
        match self {
            Layer::Dense(l) => {
                l.param_meta().into_iter().map(|(n, r, c)| (n.to_string(), r, c)).collect()
            }
            Layer::Conv1d(l) => {
                l.param_meta().into_iter().map(|(n, r, c)| (n.to_string(), r, c)).collect()
            }
            Layer::Rnn(l) => {
                l.param_meta().into_iter().map(|(n, r, c)| (n.to_string(), r, c)).collect()
            }
            Layer::Lstm(l) => l.param_meta(),
            Layer::Gru(l) => l.param_meta(),
            _ => vec![],
        }
    }

    pub fn params(&self) -> Vec<&[f64]> {
        match self {
            Layer::Dense(l) => l.params(),
            Layer::Conv1d(l) => l.params(),
            Layer::Rnn(l) => l.params(),
            Layer::Lstm(l) => l.params(),
            Layer::Gru(l) => l.params(),
            _ => vec![],
        }
    }

    pub fn params_mut(&mut self) -> Vec<&mut [f64]> {
        match self {
            Layer::Dense(l) => l.params_mut(),
            Layer::Conv1d(l) => l.params_mut(),
            Layer::Rnn(l) => l.params_mut(),
            Layer::Lstm(l) => l.params_mut(),
            Layer::Gru(l) => l.params_mut(),
            _ => vec![],
        }
    }
}

/// Per-layer forward cache.
#[derive(Debug, Clone)]
pub enum LayerCache {
    Dense(DenseCache),
    Conv1d(Conv1dCache),
    Rnn(RnnCache),
    Lstm(LstmCache),
    Gru(GruCache),
    Dropout(DropoutCache),
    Shape { in_rows: usize, in_cols: usize },
}

/// Forward-pass mode: inference, or training with an RNG for dropout.
pub enum Mode<'a> {
    Infer,
    Train(&'a mut ChaCha8Rng),
}

/// Gradients for every parameter tensor of every layer, aligned with the
/// canonical parameter order.
pub type Grads = Vec<Vec<Vec<f64>>>;

#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub layers: Vec<Layer>,
}

impl Model {
    pub fn new(layers: Vec<Layer>) -> Self {
        Self { layers }
    }

    pub fn n_params(&self) -> usize {
        self.layers.iter().map(|l| l.n_params()).sum()
    }

    /// Zero-filled gradient buffers shaped like the parameters.
    pub fn zero_grads(&self) -> Grads {
        self.layers
            .iter()
            .map(|l| l.params().into_iter().map(|p| vec![0.0; p.len()]).collect())
            .collect()
    }

    pub fn forward_cached(&self, input: &Tensor, mode: &mut Mode) -> Result<(Tensor, Vec<LayerCache>)> {
        let mut caches = Vec::with_capacity(self.layers.len());
        let mut cur = input.clone();
        for (idx, layer) in self.layers.iter().enumerate() {
            let (next, cache) = match layer {
                Layer::Dense(l) => {
                    let (y, c) = l.forward(&cur);
                    (y, LayerCache::Dense(c))
                }
                Layer::Conv1d(l) => {
                    let (y, c) = l.forward(&cur, idx)?;
                    (y, LayerCache::Conv1d(c))
                }
                Layer::Rnn(l) => {
                    let (y, c) = l.forward(&cur, idx)?;
                    (y, LayerCache::Rnn(c))
                }
                Layer::Lstm(l) => {
                    let (y, c) = l.forward(&cur, idx)?;
                    (y, LayerCache::Lstm(c))
                }
                Layer::Gru(l) => {
                    let (y, c) = l.forward(&cur, idx)?;
                    (y, LayerCache::Gru(c))
                }
                Layer::Dropout(l) => {
                    let rng = match mode {
                        Mode::Infer => None,
                        Mode::Train(rng) => Some(&mut **rng),
                    };
                    let (y, c) = l.forward(&cur, rng);
                    (y, LayerCache::Dropout(c))
                }
                Layer::Flatten => {
                    let c = LayerCache::Shape { in_rows: cur.rows(), in_cols: cur.cols() };
                    (flatten(&cur), c)
                }
                Layer::ToSteps => {
                    let c = LayerCache::Shape { in_rows: cur.rows(), in_cols: cur.cols() };
                    (to_steps(&cur), c)
                }
            };
            caches.push(cache);
            cur = next;
        }
        Ok((cur, caches))
    }

    /// Inference-mode forward pass.
    pub fn forward(&self, input: &Tensor) -> Result<Tensor> {
        Ok(self.forward_cached(input, &mut Mode::Infer)?.0)
    }

    /// Accumulates parameter gradients into `grads` and returns the
    /// gradient with respect to the model input.
    pub fn backward(&self, caches: &[LayerCache], grad_out: &Tensor, grads: &mut Grads) -> Tensor {
        let mut grad = grad_out.clone();
        for (idx, layer) in self.layers.iter().enumerate().rev() {
            let cache = &caches[idx];
            let layer_grads = &mut grads[idx];
            grad = match (layer, cache) {
                (Layer::Dense(l), LayerCache::Dense(c)) => {
                    l.backward(c, grad.as_slice(), layer_grads)
                }
                (Layer::Conv1d(l), LayerCache::Conv1d(c)) => l.backward(c, &grad, layer_grads),
                (Layer::Rnn(l), LayerCache::Rnn(c)) => l.backward(c, &grad, layer_grads),
                (Layer::Lstm(l), LayerCache::Lstm(c)) => l.backward(c, &grad, layer_grads),
                (Layer::Gru(l), LayerCache::Gru(c)) => l.backward(c, &grad, layer_grads),
                (Layer::Dropout(l), LayerCache::Dropout(c)) => l.backward(c, &grad),
                (Layer::Flatten, LayerCache::Shape { in_rows, in_cols }) => {
                    grad.reshaped(*in_rows, *in_cols)
                }
                (Layer::ToSteps, LayerCache::Shape { .. }) => to_steps_backward(&grad),
                _ => unreachable!("cache kind always matches layer kind"),
            };
        }
        grad
    }

    /// MSE over the 4 outputs: mean((out - target)^2).
    pub fn mse(out: &Tensor, target: &[f64; 4]) -> f64 {
        out.as_slice()
            .iter()
            .zip(target)
            .map(|(o, t)| (o - t) * (o - t))
            .sum::<f64>()
            / 4.0
    }

    /// Gradient of [`Model::mse`] with respect to the output, scaled by
    /// `weight` (used for batch averaging).
    pub fn mse_grad(out: &Tensor, target: &[f64; 4], weight: f64) -> Tensor {
        let g: Vec<f64> = out
            .as_slice()
            .iter()
            .zip(target)
            .map(|(o, t)| weight * 2.0 * (o - t) / 4.0)
            .collect();
        Tensor::row_vector(g)
    }

    /// Copies all parameters out (snapshot for best-epoch selection).
    pub fn snapshot(&self) -> Vec<Vec<f64>> {
        self.layers
            .iter()
            .flat_map(|l| l.params().into_iter().map(|p| p.to_vec()))
            .collect()
    }

    /// Restores a snapshot taken from the same architecture.
    pub fn restore(&mut self, snapshot: &[Vec<f64>]) {
        let mut it = snapshot.iter();
        for layer in &mut self.layers {
            for p in layer.params_mut() {
                let s = it.next().expect("snapshot matches architecture");
                p.copy_from_slice(s);
            }
        }
        assert!(it.next().is_none(), "snapshot matches architecture");
    }
}
