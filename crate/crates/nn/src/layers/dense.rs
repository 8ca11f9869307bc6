//! Fully connected layer. Flattens whatever shape arrives.

use crate::activation::Activation;
use crate::tensor::{matvec, outer_acc, matvec_t_acc, Tensor};

#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    /// (units x inputs), row-major.
    pub w: Tensor,
    pub b: Vec<f64>,
    pub act: Activation,
}

#[derive(Debug, Clone)]
pub struct DenseCache {
    x: Vec<f64>,
    z: Vec<f64>,
    y: Vec<f64>,
    in_rows: usize,
    in_cols: usize,
}

impl Dense {
    pub fn units(&self) -> usize {
        self.w.rows()
    }

    pub fn inputs(&self) -> usize {
        self.w.cols()
    }

    pub fn forward(&self, x: &Tensor) -> (Tensor, DenseCache) {
        let flat = x.as_slice();
        let mut z = vec![0.0; self.units()];
        matvec(&self.w, flat, &mut z);
        for (zv, bv) in z.iter_mut().zip(&self.b) {
            *zv += bv;
        }
        let y: Vec<f64> = z.iter().map(|&v| self.act.apply(v)).collect();
        let cache = DenseCache {
            x: flat.to_vec(),
            z,
            y: y.clone(),
            in_rows: x.rows(),
            in_cols: x.cols(),
        };
        (Tensor::row_vector(y), cache)
    }

    /// Returns the gradient w.r.t. the input; parameter gradients land in
    /// `grads` ordered as [dw, db].
    pub fn backward(&self, cache: &DenseCache, grad_out: &[f64], grads: &mut [Vec<f64>]) -> Tensor {
        let mut dz = vec![0.0; self.units()];
        for i in 0..dz.len() {
            dz[i] = grad_out[i] * self.act.grad(cache.z[i], cache.y[i]);
        }
        outer_acc(&mut grads[0], &dz, &cache.x);
        for (g, d) in grads[1].iter_mut().zip(&dz) {
            *g += d;
        }
        let mut dx = vec![0.0; cache.x.len()];
        matvec_t_acc(&self.w, &dz, &mut dx);
        Tensor::from_vec(cache.in_rows, cache.in_cols, dx)
    }

    pub fn param_meta(&self) -> Vec<(&'static str, usize, usize)> {
        vec![("w", self.w.rows(), self.w.cols()), ("b", self.b.len(), 1)]
    }

    pub fn params(&self) -> Vec<&[f64]> {
        vec![self.w.as_slice(), &self.b]
    }

    pub fn params_mut(&mut self) -> Vec<&mut [f64]> {
        vec![self.w.as_mut_slice(), &mut self.b]
    }

    pub fn n_params(&self) -> usize {
        self.w.len() + self.b.len()
    }
}
