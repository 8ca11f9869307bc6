//! GRU layer: update and reset gates, cell state equal to hidden state,
//! with optional reverse-direction twin.
//!
//! cand = tanh(W_cc (gr . c_prev) + W_cx x + b_c)
//! gu   = sig (W_uc c_prev + W_ux x + b_u)
//! gr   = sig (W_rc c_prev + W_rx x + b_r)
//! c    = gu . cand + (1 - gu) . c_prev
//! h    = c

use crate::error::{NnError, Result};
use crate::tensor::{matvec_acc, matvec_t_acc, outer_acc, Tensor};

#[derive(Debug, Clone, PartialEq)]
pub struct GruCellParams {
    pub w_cx: Tensor,
    pub w_cc: Tensor,
    pub b_c: Vec<f64>,
    pub w_ux: Tensor,
    pub w_uc: Tensor,
    pub b_u: Vec<f64>,
    pub w_rx: Tensor,
    pub w_rc: Tensor,
    pub b_r: Vec<f64>,
}

impl GruCellParams {
    pub fn hidden(&self) -> usize {
        self.w_cc.rows()
    }

    pub fn input(&self) -> usize {
        self.w_cx.cols()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gru {
    pub fwd: GruCellParams,
    pub bwd: Option<GruCellParams>,
    pub many_to_one: bool,
}

#[derive(Debug, Clone, Default)]
struct DirCache {
    xs: Vec<Vec<f64>>,
    cands: Vec<Vec<f64>>,
    gus: Vec<Vec<f64>>,
    grs: Vec<Vec<f64>>,
    cs: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct GruCache {
    fwd: DirCache,
    bwd: Option<DirCache>,
    in_rows: usize,
    in_cols: usize,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// One GRU step; the returned state doubles as the hidden output.
pub fn gru_cell_forward(p: &GruCellParams, x: &[f64], c_prev: &[f64]) -> Vec<f64> {
    let n_h = p.hidden();
    let mut z_u = p.b_u.clone();
    matvec_acc(&p.w_uc, c_prev, &mut z_u);
    matvec_acc(&p.w_ux, x, &mut z_u);
    let gu: Vec<f64> = z_u.iter().map(|&v| sigmoid(v)).collect();
    let mut z_r = p.b_r.clone();
    matvec_acc(&p.w_rc, c_prev, &mut z_r);
    matvec_acc(&p.w_rx, x, &mut z_r);
    let gr: Vec<f64> = z_r.iter().map(|&v| sigmoid(v)).collect();
    let gated: Vec<f64> = (0..n_h).map(|i| gr[i] * c_prev[i]).collect();
    let mut z_c = p.b_c.clone();
    matvec_acc(&p.w_cc, &gated, &mut z_c);
    matvec_acc(&p.w_cx, x, &mut z_c);
    let cand: Vec<f64> = z_c.iter().map(|&v| v.tanh()).collect();
    (0..n_h).map(|i| gu[i] * cand[i] + (1.0 - gu[i]) * c_prev[i]).collect()
}

fn run_direction(p: &GruCellParams, steps: impl Iterator<Item = Vec<f64>>) -> DirCache {
    let n_h = p.hidden();
    let mut cache = DirCache::default();
    let mut c = vec![0.0; n_h];
    for x in steps {
        let mut z_u = p.b_u.clone();
        matvec_acc(&p.w_uc, &c, &mut z_u);
        matvec_acc(&p.w_ux, &x, &mut z_u);
        let gu: Vec<f64> = z_u.iter().map(|&v| sigmoid(v)).collect();
        let mut z_r = p.b_r.clone();
        matvec_acc(&p.w_rc, &c, &mut z_r);
        matvec_acc(&p.w_rx, &x, &mut z_r);
        let gr: Vec<f64> = z_r.iter().map(|&v| sigmoid(v)).collect();
        let gated: Vec<f64> = (0..n_h).map(|i| gr[i] * c[i]).collect();
        let mut z_c = p.b_c.clone();
        matvec_acc(&p.w_cc, &gated, &mut z_c);
        matvec_acc(&p.w_cx, &x, &mut z_c);
        let cand: Vec<f64> = z_c.iter().map(|&v| v.tanh()).collect();
        let c_new: Vec<f64> =
            (0..n_h).map(|i| gu[i] * cand[i] + (1.0 - gu[i]) * c[i]).collect();
        cache.xs.push(x);
        cache.cands.push(cand);
        cache.gus.push(gu);
        cache.grs.push(gr);
        cache.cs.push(c_new.clone());
        c = c_new;
    }
    cache
}

impl Gru {
    pub fn hidden_per_direction(&self) -> usize {
        self.fwd.hidden()
    }

    pub fn is_bidirectional(&self) -> bool {
        self.bwd.is_some()
    }

    pub fn output_width(&self) -> usize {
        self.fwd.hidden() * if self.is_bidirectional() { 2 } else { 1 }
    }

    pub fn forward(&self, x: &Tensor, layer_idx: usize) -> Result<(Tensor, GruCache)> {
        if x.cols() != self.fwd.input() {
            return Err(NnError::ShapeMismatch {
                layer: layer_idx,
                detail: format!("gru expects {} features, input has {}", self.fwd.input(), x.cols()),
            });
        }
        let t_steps = x.rows();
        let fwd = run_direction(&self.fwd, (0..t_steps).map(|t| x.row(t).to_vec()));
        let bwd = self
            .bwd
            .as_ref()
            .map(|p| run_direction(p, (0..t_steps).rev().map(|t| x.row(t).to_vec())));
        let n_h = self.fwd.hidden();
        let out = if self.many_to_one {
            let mut v = fwd.cs[t_steps - 1].clone();
            if let Some(b) = &bwd {
                v.extend_from_slice(&b.cs[t_steps - 1]);
            }
            Tensor::row_vector(v)
        } else {
            let mut out = Tensor::zeros(t_steps, self.output_width());
            for t in 0..t_steps {
                let row = out.row_mut(t);
                row[..n_h].copy_from_slice(&fwd.cs[t]);
                if let Some(b) = &bwd {
                    row[n_h..].copy_from_slice(&b.cs[t_steps - 1 - t]);
                }
            }
            out
        };
        Ok((out, GruCache { fwd, bwd, in_rows: x.rows(), in_cols: x.cols() }))
    }

    fn backward_direction(
        p: &GruCellParams,
        cache: &DirCache,
        grad_steps: &[Vec<f64>],
        grads: &mut [Vec<f64>],
        dx_steps: &mut [Vec<f64>],
        reversed: bool,
    ) {
        let t_steps = cache.xs.len();
        let n_h = p.hidden();
        let mut carry = vec![0.0; n_h];
        for step in (0..t_steps).rev() {
            let input_index = if reversed { t_steps - 1 - step } else { step };
            let mut dc = carry.clone();
            let g_ext = &grad_steps[input_index];
            if !g_ext.is_empty() {
                for (a, b) in dc.iter_mut().zip(g_ext) {
                    *a += b;
                }
            }
            let cand = &cache.cands[step];
            let gu = &cache.gus[step];
            let gr = &cache.grs[step];
            let c_prev: Vec<f64> =
                if step == 0 { vec![0.0; n_h] } else { cache.cs[step - 1].clone() };

            // c = gu . cand + (1 - gu) . c_prev
            let mut dgu = vec![0.0; n_h];
            let mut dcand = vec![0.0; n_h];
            let mut dc_prev = vec![0.0; n_h];
            for i in 0..n_h {
                dgu[i] = dc[i] * (cand[i] - c_prev[i]);
                dcand[i] = dc[i] * gu[i];
                dc_prev[i] = dc[i] * (1.0 - gu[i]);
            }
            let dz_c: Vec<f64> = (0..n_h).map(|i| dcand[i] * (1.0 - cand[i] * cand[i])).collect();
            // cand = tanh(W_cc (gr . c_prev) + W_cx x + b_c)
            let gated: Vec<f64> = (0..n_h).map(|i| gr[i] * c_prev[i]).collect();
            let mut dgated = vec![0.0; n_h];
            matvec_t_acc(&p.w_cc, &dz_c, &mut dgated);
            let mut dgr = vec![0.0; n_h];
            for i in 0..n_h {
                dgr[i] = dgated[i] * c_prev[i];
                dc_prev[i] += dgated[i] * gr[i];
            }
            let dz_u: Vec<f64> = (0..n_h).map(|i| dgu[i] * gu[i] * (1.0 - gu[i])).collect();
            let dz_r: Vec<f64> = (0..n_h).map(|i| dgr[i] * gr[i] * (1.0 - gr[i])).collect();

            let x = &cache.xs[step];
            let dx = &mut dx_steps[input_index];
            // Candidate block: W_cx, W_cc, b_c operate on x and gated.
            outer_acc(&mut grads[0], &dz_c, x);
            outer_acc(&mut grads[1], &dz_c, &gated);
            for (g, d) in grads[2].iter_mut().zip(&dz_c) {
                *g += d;
            }
            matvec_t_acc(&p.w_cx, &dz_c, dx);
            // Update gate.
            outer_acc(&mut grads[3], &dz_u, x);
            outer_acc(&mut grads[4], &dz_u, &c_prev);
            for (g, d) in grads[5].iter_mut().zip(&dz_u) {
                *g += d;
            }
            matvec_t_acc(&p.w_ux, &dz_u, dx);
            matvec_t_acc(&p.w_uc, &dz_u, &mut dc_prev);
            // Reset gate.
            outer_acc(&mut grads[6], &dz_r, x);
            outer_acc(&mut grads[7], &dz_r, &c_prev);
            for (g, d) in grads[8].iter_mut().zip(&dz_r) {
                *g += d;
            }
            matvec_t_acc(&p.w_rx, &dz_r, dx);
            matvec_t_acc(&p.w_rc, &dz_r, &mut dc_prev);
            carry = dc_prev;
        }
    }

    pub fn backward(&self, cache: &GruCache, grad_out: &Tensor, grads: &mut [Vec<f64>]) -> Tensor {
        let t_steps = cache.in_rows;
        let n_in = cache.in_cols;
        let n_h = self.fwd.hidden();
        let empty: Vec<f64> = vec![];
        let mut fwd_grads: Vec<Vec<f64>> = vec![empty.clone(); t_steps];
        let mut bwd_grads: Vec<Vec<f64>> = vec![empty; t_steps];
        if self.many_to_one {
            let g = grad_out.as_slice();
            fwd_grads[t_steps - 1] = g[..n_h].to_vec();
            if self.bwd.is_some() {
                bwd_grads[0] = g[n_h..].to_vec();
            }
        } else {
            for t in 0..t_steps {
                let row = grad_out.row(t);
                fwd_grads[t] = row[..n_h].to_vec();
                if self.bwd.is_some() {
                    bwd_grads[t] = row[n_h..].to_vec();
                }
            }
        }
        let mut dx_steps: Vec<Vec<f64>> = vec![vec![0.0; n_in]; t_steps];
        let (fwd_slot, bwd_slot) = grads.split_at_mut(9);
        Self::backward_direction(&self.fwd, &cache.fwd, &fwd_grads, fwd_slot, &mut dx_steps, false);
        if let Some(bp) = &self.bwd {
            Self::backward_direction(
                bp,
                cache.bwd.as_ref().expect("bidirectional cache"),
                &bwd_grads,
                bwd_slot,
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

    fn cell_meta(prefix: &str, p: &GruCellParams) -> Vec<(String, usize, usize)> {
        vec![
            (format!("{prefix}.w_cx"), p.w_cx.rows(), p.w_cx.cols()),
            (format!("{prefix}.w_cc"), p.w_cc.rows(), p.w_cc.cols()),
            (format!("{prefix}.b_c"), p.b_c.len(), 1),
            (format!("{prefix}.w_ux"), p.w_ux.rows(), p.w_ux.cols()),
            (format!("{prefix}.w_uc"), p.w_uc.rows(), p.w_uc.cols()),
            (format!("{prefix}.b_u"), p.b_u.len(), 1),
            (format!("{prefix}.w_rx"), p.w_rx.rows(), p.w_rx.cols()),
            (format!("{prefix}.w_rc"), p.w_rc.rows(), p.w_rc.cols()),
            (format!("{prefix}.b_r"), p.b_r.len(), 1),
        ]
    }

    pub fn param_meta(&self) -> Vec<(String, usize, usize)> {
        let mut v = Self::cell_meta("fwd", &self.fwd);
        if let Some(b) = &self.bwd {
            v.extend(Self::cell_meta("bwd", b));
        }
        v
    }

    fn cell_params(p: &GruCellParams) -> Vec<&[f64]> {
        vec![
            p.w_cx.as_slice(),
            p.w_cc.as_slice(),
            &p.b_c,
            p.w_ux.as_slice(),
            p.w_uc.as_slice(),
            &p.b_u,
            p.w_rx.as_slice(),
            p.w_rc.as_slice(),
            &p.b_r,
        ]
    }

    fn cell_params_mut(p: &mut GruCellParams) -> Vec<&mut [f64]> {
        vec![
            p.w_cx.as_mut_slice(),
            p.w_cc.as_mut_slice(),
            &mut p.b_c,
            p.w_ux.as_mut_slice(),
            p.w_uc.as_mut_slice(),
            &mut p.b_u,
            p.w_rx.as_mut_slice(),
            p.w_rc.as_mut_slice(),
            &mut p.b_r,
        ]
    }

    pub fn params(&self) -> Vec<&[f64]> {
        let mut v = Self::cell_params(&self.fwd);
        if let Some(b) = &self.bwd {
            v.extend(Self::cell_params(b));
        }
        v
    }

    pub fn params_mut(&mut self) -> Vec<&mut [f64]> {
        let mut v = Self::cell_params_mut(&mut self.fwd);
        if let Some(b) = &mut self.bwd {
            v.extend(Self::cell_params_mut(b));
        }
        v
    }

    pub fn n_params(&self) -> usize {
        self.params().iter().map(|p| p.len()).sum()
    }
}
