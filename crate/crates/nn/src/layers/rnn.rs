//! Vanilla recurrent layer: h_t = act(W_h h_{t-1} + W_x x_t + b_h), with
//! an optional per-step output map y_t = act2(W_y h_t + b_y) in
//! many-to-many mode, and an optional reverse-direction twin whose
//! per-step outputs are concatenated feature-wise.

use crate::activation::Activation;
use crate::error::{NnError, Result};
use crate::tensor::{matvec_acc, matvec_t_acc, outer_acc, Tensor};

#[derive(Debug, Clone, PartialEq)]
pub struct RnnCellParams {
    /// (hidden x input)
    pub w_x: Tensor,
    /// (hidden x hidden)
    pub w_h: Tensor,
    pub b_h: Vec<f64>,
}

impl RnnCellParams {
    pub fn hidden(&self) -> usize {
        self.w_h.rows()
    }

    pub fn input(&self) -> usize {
        self.w_x.cols()
    }
}

/// Per-step output map of the many-to-many cell.
#[derive(Debug, Clone, PartialEq)]
pub struct RnnOutputMap {
    pub w_y: Tensor,
    pub b_y: Vec<f64>,
    pub act: Activation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rnn {
    pub fwd: RnnCellParams,
    pub bwd: Option<RnnCellParams>,
    pub act: Activation,
    pub many_to_one: bool,
    pub out_map: Option<RnnOutputMap>,
}

#[derive(Debug, Clone)]
struct DirCache {
    /// x_t per step (after possible reversal), T x n_i.
    xs: Vec<Vec<f64>>,
    /// Pre-activations per step.
    zs: Vec<Vec<f64>>,
    /// Hidden states per step.
    hs: Vec<Vec<f64>>,
    /// Output-map pre-activations (many-to-many with out_map only).
    zys: Vec<Vec<f64>>,
    ys: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct RnnCache {
    fwd: DirCache,
    bwd: Option<DirCache>,
    in_rows: usize,
    in_cols: usize,
}

/// One step of the vanilla recurrence: act(W_h h_prev + W_x x + b_h).
pub fn rnn_cell_forward(p: &RnnCellParams, act: Activation, x: &[f64], h_prev: &[f64]) -> Vec<f64> {
    let mut z = p.b_h.clone();
    matvec_acc(&p.w_h, h_prev, &mut z);
    matvec_acc(&p.w_x, x, &mut z);
    z.iter().map(|&v| act.apply(v)).collect()
}

fn run_direction(
    p: &RnnCellParams,
    act: Activation,
    out_map: Option<&RnnOutputMap>,
    steps: impl Iterator<Item = Vec<f64>>,
) -> DirCache {
    let n_h = p.hidden();
    let mut cache = DirCache { xs: vec![], zs: vec![], hs: vec![], zys: vec![], ys: vec![] };
    let mut h = vec![0.0; n_h];
    for x in steps {
        let mut z = p.b_h.clone();
        matvec_acc(&p.w_h, &h, &mut z);
        matvec_acc(&p.w_x, &x, &mut z);
        h = z.iter().map(|&v| act.apply(v)).collect();
        if let Some(map) = out_map {
            let mut zy = map.b_y.clone();
            matvec_acc(&map.w_y, &h, &mut zy);
            let y: Vec<f64> = zy.iter().map(|&v| map.act.apply(v)).collect();
            cache.zys.push(zy);
            cache.ys.push(y);
        }
        cache.xs.push(x);
        cache.zs.push(z);
        cache.hs.push(h.clone());
    }
    cache
}

impl Rnn {
    pub fn hidden_per_direction(&self) -> usize {
        self.fwd.hidden()
    }

    pub fn is_bidirectional(&self) -> bool {
        self.bwd.is_some()
    }

    /// Feature width the next layer sees per step (or in total for
    /// many-to-one).
    pub fn output_width(&self) -> usize {
        let base = match &self.out_map {
            Some(map) => map.w_y.rows(),
            None => self.fwd.hidden(),
        };
        if self.is_bidirectional() {
            2 * base
        } else {
            base
        }
    }

    pub fn forward(&self, x: &Tensor, layer_idx: usize) -> Result<(Tensor, RnnCache)> {
        if x.cols() != self.fwd.input() {
            return Err(NnError::ShapeMismatch {
                layer: layer_idx,
                detail: format!("rnn expects {} features, input has {}", self.fwd.input(), x.cols()),
            });
        }
        if self.out_map.is_some() && (self.bwd.is_some() || self.many_to_one) {
            return Err(NnError::InvalidParameter(
                "per-step output map is only supported on unidirectional many-to-many layers"
                    .into(),
            ));
        }
        let t_steps = x.rows();
        let fwd = run_direction(
            &self.fwd,
            self.act,
            self.out_map.as_ref(),
            (0..t_steps).map(|t| x.row(t).to_vec()),
        );
        let bwd = self.bwd.as_ref().map(|p| {
            run_direction(p, self.act, None, (0..t_steps).rev().map(|t| x.row(t).to_vec()))
        });
        let out = self.collect_output(&fwd, bwd.as_ref(), t_steps);
        Ok((out, RnnCache { fwd, bwd, in_rows: x.rows(), in_cols: x.cols() }))
    }

    fn collect_output(&self, fwd: &DirCache, bwd: Option<&DirCache>, t_steps: usize) -> Tensor {
        let fwd_steps: &Vec<Vec<f64>> = if self.out_map.is_some() { &fwd.ys } else { &fwd.hs };
        if self.many_to_one {
            let mut v = fwd_steps[t_steps - 1].clone();
            if let Some(b) = bwd {
                // The reverse direction's final state has consumed the
                // whole sequence ending at t = 0.
                v.extend_from_slice(&b.hs[t_steps - 1]);
            }
            return Tensor::row_vector(v);
        }
        let width = self.output_width();
        let mut out = Tensor::zeros(t_steps, width);
        for t in 0..t_steps {
            let row = out.row_mut(t);
            let f = &fwd_steps[t];
            row[..f.len()].copy_from_slice(f);
            if let Some(b) = bwd {
                // bwd.hs[k] was computed at input index t_steps-1-k.
                let g = &b.hs[t_steps - 1 - t];
                row[f.len()..].copy_from_slice(g);
            }
        }
        out
    }

    /// Back-propagates through time for one direction. `grad_steps[t]` is
    /// the gradient on this direction's per-step output at *input* index
    /// t (already un-reversed by the caller).
    #[allow(clippy::too_many_arguments)]
    fn backward_direction(
        p: &RnnCellParams,
        act: Activation,
        out_map: Option<&RnnOutputMap>,
        cache: &DirCache,
        grad_steps: &[Vec<f64>],
        grads: &mut [Vec<f64>],
        map_grads: Option<&mut [Vec<f64>]>,
        dx_steps: &mut [Vec<f64>],
        reversed: bool,
    ) {
        let t_steps = cache.xs.len();
        let n_h = p.hidden();
        let mut carry = vec![0.0; n_h];
        let mut map_grads = map_grads;
        for step in (0..t_steps).rev() {
            let input_index = if reversed { t_steps - 1 - step } else { step };
            let mut dh = carry.clone();
            let g_ext = &grad_steps[input_index];
            if let Some(map) = out_map {
                if !g_ext.is_empty() {
                    let zy = &cache.zys[step];
                    let yv = &cache.ys[step];
                    let dzy: Vec<f64> = (0..zy.len())
                        .map(|i| g_ext[i] * map.act.grad(zy[i], yv[i]))
                        .collect();
                    let mg = map_grads.as_mut().expect("output map gradients");
                    outer_acc(&mut mg[0], &dzy, &cache.hs[step]);
                    for (g, d) in mg[1].iter_mut().zip(&dzy) {
                        *g += d;
                    }
                    matvec_t_acc(&map.w_y, &dzy, &mut dh);
                }
            } else if !g_ext.is_empty() {
                for (a, b) in dh.iter_mut().zip(g_ext) {
                    *a += b;
                }
            }
            let z = &cache.zs[step];
            let h = &cache.hs[step];
            let dz: Vec<f64> = (0..n_h).map(|i| dh[i] * act.grad(z[i], h[i])).collect();
            let h_prev: Vec<f64> =
                if step == 0 { vec![0.0; n_h] } else { cache.hs[step - 1].clone() };
            outer_acc(&mut grads[0], &dz, &cache.xs[step]);
            outer_acc(&mut grads[1], &dz, &h_prev);
            for (g, d) in grads[2].iter_mut().zip(&dz) {
                *g += d;
            }
            carry = vec![0.0; n_h];
            matvec_t_acc(&p.w_h, &dz, &mut carry);
            matvec_t_acc(&p.w_x, &dz, &mut dx_steps[input_index]);
        }
    }

    pub fn backward(&self, cache: &RnnCache, grad_out: &Tensor, grads: &mut [Vec<f64>]) -> Tensor {
        let t_steps = cache.in_rows;
        let n_in = cache.in_cols;
        let per_dir = match &self.out_map {
            Some(m) => m.w_y.rows(),
            None => self.fwd.hidden(),
        };

        // Split the incoming gradient into per-step, per-direction pieces.
        let empty: Vec<f64> = vec![];
        let mut fwd_grads: Vec<Vec<f64>> = vec![empty.clone(); t_steps];
        let mut bwd_grads: Vec<Vec<f64>> = vec![empty; t_steps];
        if self.many_to_one {
            let g = grad_out.as_slice();
            fwd_grads[t_steps - 1] = g[..per_dir].to_vec();
            if self.bwd.is_some() {
                bwd_grads[0] = g[per_dir..].to_vec();
            }
        } else {
            for t in 0..t_steps {
                let row = grad_out.row(t);
                fwd_grads[t] = row[..per_dir].to_vec();
                if self.bwd.is_some() {
                    bwd_grads[t] = row[per_dir..].to_vec();
                }
            }
        }

        let mut dx_steps: Vec<Vec<f64>> = vec![vec![0.0; n_in]; t_steps];
        let n_cell = 3;
        let has_map = self.out_map.is_some();
        let (fwd_slot, rest) = grads.split_at_mut(n_cell);
        Self::backward_direction(
            &self.fwd,
            self.act,
            self.out_map.as_ref(),
            &cache.fwd,
            &fwd_grads,
            fwd_slot,
            if has_map {
                // out_map grads live after the (absent) bwd block
                Some(rest)
            } else {
                None
            },
            &mut dx_steps,
            false,
        );
        if let Some(bp) = &self.bwd {
            Self::backward_direction(
                bp,
                self.act,
                None,
                cache.bwd.as_ref().expect("bidirectional cache"),
                &bwd_grads,
                rest,
                None,
                &mut dx_steps,
                true,
            );
        }
        let mut dx = Tensor::zeros(t_steps, n_in);
        for t in 0..t_steps {
            dx.row_mut(t).copy_from_slice(&dx_steps[t]);
        }
        dx
    }

    pub fn param_meta(&self) -> Vec<(&'static str, usize, usize)> {
        let mut v = vec![
            ("fwd.w_x", self.fwd.w_x.rows(), self.fwd.w_x.cols()),
            ("fwd.w_h", self.fwd.w_h.rows(), self.fwd.w_h.cols()),
            ("fwd.b_h", self.fwd.b_h.len(), 1),
        ];
        if let Some(b) = &self.bwd {
            v.push(("bwd.w_x", b.w_x.rows(), b.w_x.cols()));
            v.push(("bwd.w_h", b.w_h.rows(), b.w_h.cols()));
            v.push(("bwd.b_h", b.b_h.len(), 1));
        }
        if let Some(m) = &self.out_map {
            v.push(("out.w_y", m.w_y.rows(), m.w_y.cols()));
            v.push(("out.b_y", m.b_y.len(), 1));
        }
        v
    }

    pub fn params(&self) -> Vec<&[f64]> {
        let mut v = vec![self.fwd.w_x.as_slice(), self.fwd.w_h.as_slice(), self.fwd.b_h.as_slice()];
        if let Some(b) = &self.bwd {
            v.push(b.w_x.as_slice());
            v.push(b.w_h.as_slice());
            v.push(b.b_h.as_slice());
        }
        if let Some(m) = &self.out_map {
            v.push(m.w_y.as_slice());
            v.push(m.b_y.as_slice());
        }
        v
    }

    pub fn params_mut(&mut self) -> Vec<&mut [f64]> {
        let mut v: Vec<&mut [f64]> = vec![];
        v.push(self.fwd.w_x.as_mut_slice());
        v.push(self.fwd.w_h.as_mut_slice());
        v.push(self.fwd.b_h.as_mut_slice());
        if let Some(b) = &mut self.bwd {
            v.push(b.w_x.as_mut_slice());
            v.push(b.w_h.as_mut_slice());
            v.push(b.b_h.as_mut_slice());
        }
        if let Some(m) = &mut self.out_map {
            v.push(m.w_y.as_mut_slice());
            v.push(m.b_y.as_mut_slice());
        }
        v
    }

    pub fn n_params(&self) -> usize {
        self.params().iter().map(|p| p.len()).sum()
    }
}
