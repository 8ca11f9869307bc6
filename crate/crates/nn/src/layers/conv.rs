//! 1-D convolution (cross-correlation) over the length axis with
//! valid padding; input (L x C_in), output (L_out x n_ker).

use crate::activation::Activation;
use crate::error::{NnError, Result};
use crate::tensor::Tensor;

#[derive(Debug, Clone, PartialEq)]
pub struct Conv1d {
    /// Flattened (n_ker x l_ker x in_ch).
    pub kernels: Vec<f64>,
    pub bias: Vec<f64>,
    pub n_ker: usize,
    pub l_ker: usize,
    pub in_ch: usize,
    pub stride: usize,
    pub act: Activation,
}

#[derive(Debug, Clone)]
pub struct Conv1dCache {
    x: Tensor,
    z: Tensor,
    y: Tensor,
}

/// Output length for valid padding at dilation 1:
/// floor((l_in - l_ker)/stride) + 1.
pub fn conv_output_len(l_in: usize, l_ker: usize, stride: usize) -> Option<usize> {
    if l_in < l_ker || stride == 0 {
        return None;
    }
    Some((l_in - l_ker) / stride + 1)
}

impl Conv1d {
    #[inline]
    fn k(&self, ker: usize, j: usize, c: usize) -> f64 {
        self.kernels[(ker * self.l_ker + j) * self.in_ch + c]
    }

    pub fn forward(&self, x: &Tensor, layer_idx: usize) -> Result<(Tensor, Conv1dCache)> {
        if x.cols() != self.in_ch {
            return Err(NnError::ShapeMismatch {
                layer: layer_idx,
                detail: format!("conv expects {} channels, input has {}", self.in_ch, x.cols()),
            });
        }
        let l_out = conv_output_len(x.rows(), self.l_ker, self.stride).ok_or_else(|| {
            NnError::ShapeMismatch {
                layer: layer_idx,
                detail: format!(
                    "kernel of {} does not fit input of length {}",
                    self.l_ker,
                    x.rows()
                ),
            }
        })?;
        let mut z = Tensor::zeros(l_out, self.n_ker);
        for t in 0..l_out {
            let base = t * self.stride;
            for ker in 0..self.n_ker {
                let mut acc = self.bias[ker];
                for j in 0..self.l_ker {
                    let row = x.row(base + j);
                    for (c, &xv) in row.iter().enumerate() {
                        acc += self.k(ker, j, c) * xv;
                    }
                }
                *z.at_mut(t, ker) = acc;
            }
        }
        let mut y = z.clone();
        for v in y.as_mut_slice() {
            *v = self.act.apply(*v);
        }
        let cache = Conv1dCache { x: x.clone(), z, y: y.clone() };
        Ok((y, cache))
    }

    pub fn backward(&self, cache: &Conv1dCache, grad_out: &Tensor, grads: &mut [Vec<f64>]) -> Tensor {
        let l_out = cache.z.rows();
        let mut dx = Tensor::zeros(cache.x.rows(), cache.x.cols());
        let (dk, db) = {
            let (a, b) = grads.split_at_mut(1);
            (&mut a[0], &mut b[0])
        };
        for t in 0..l_out {
            let base = t * self.stride;
            for ker in 0..self.n_ker {
                let g = grad_out.at(t, ker) * self.act.grad(cache.z.at(t, ker), cache.y.at(t, ker));
                if g == 0.0 {
                    continue;
                }
                db[ker] += g;
                for j in 0..self.l_ker {
                    let xrow = cache.x.row(base + j);
                    let dxrow = dx.row_mut(base + j);
                    for c in 0..self.in_ch {
                        dk[(ker * self.l_ker + j) * self.in_ch + c] += g * xrow[c];
                        dxrow[c] += g * self.k(ker, j, c);
                    }
                }
            }
        }
        dx
    }

    pub fn param_meta(&self) -> Vec<(&'static str, usize, usize)> {
        vec![("kernels", self.n_ker, self.l_ker * self.in_ch), ("bias", self.bias.len(), 1)]
    }

    pub fn params(&self) -> Vec<&[f64]> {
        vec![&self.kernels, &self.bias]
    }

    pub fn params_mut(&mut self) -> Vec<&mut [f64]> {
        vec![&mut self.kernels, &mut self.bias]
    }

    pub fn n_params(&self) -> usize {
        self.kernels.len() + self.bias.len()
    }
}
