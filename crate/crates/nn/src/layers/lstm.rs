//! LSTM layer: candidate and update/forget/output gates over a cell
//! state, with optional reverse-direction twin.
//!
//! cand  = tanh(W_ch h + W_cx x + b_c)
//! gu    = sig (W_uh h + W_ux x + b_u)
//! gf    = sig (W_fh h + W_fx x + b_f)
//! go    = sig (W_oh h + W_ox x + b_o)
//! c     = gu . cand + gf . c_prev
//! h     = go . tanh(c)

use crate::error::{NnError, Result};
use crate::tensor::{matvec_acc, matvec_t_acc, outer_acc, Tensor};

#[derive(Debug, Clone, PartialEq)]
pub struct LstmCellParams {
    pub w_cx: Tensor,
    pub w_ch: Tensor,
    pub b_c: Vec<f64>,
    pub w_ux: Tensor,
    pub w_uh: Tensor,
    pub b_u: Vec<f64>,
    pub w_fx: Tensor,
    pub w_fh: Tensor,
    pub b_f: Vec<f64>,
    pub w_ox: Tensor,
    pub w_oh: Tensor,
    pub b_o: Vec<f64>,
}

impl LstmCellParams {
    pub fn hidden(&self) -> usize {
        self.w_ch.rows()
    }

    pub fn input(&self) -> usize {
        self.w_cx.cols()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lstm {
    pub fwd: LstmCellParams,
    pub bwd: Option<LstmCellParams>,
    pub many_to_one: bool,
}

#[derive(Debug, Clone, Default)]
struct DirCache {
    xs: Vec<Vec<f64>>,
    cands: Vec<Vec<f64>>,
    gus: Vec<Vec<f64>>,
    gfs: Vec<Vec<f64>>,
    gos: Vec<Vec<f64>>,
    cs: Vec<Vec<f64>>,
    hs: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct LstmCache {
    fwd: DirCache,
    bwd: Option<DirCache>,
    in_rows: usize,
    in_cols: usize,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

fn gate(wx: &Tensor, wh: &Tensor, b: &[f64], x: &[f64], h: &[f64], f: impl Fn(f64) -> f64) -> Vec<f64> {
    let mut z = b.to_vec();
    matvec_acc(wh, h, &mut z);
    matvec_acc(wx, x, &mut z);
    z.iter().map(|&v| f(v)).collect()
}

/// One LSTM step; returns (h, c).
pub fn lstm_cell_forward(
    p: &LstmCellParams,
    x: &[f64],
    h_prev: &[f64],
    c_prev: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    let n_h = p.hidden();
    let cand = gate(&p.w_cx, &p.w_ch, &p.b_c, x, h_prev, f64::tanh);
    let gu = gate(&p.w_ux, &p.w_uh, &p.b_u, x, h_prev, sigmoid);
    let gf = gate(&p.w_fx, &p.w_fh, &p.b_f, x, h_prev, sigmoid);
    let go = gate(&p.w_ox, &p.w_oh, &p.b_o, x, h_prev, sigmoid);
    let c: Vec<f64> = (0..n_h).map(|i| gu[i] * cand[i] + gf[i] * c_prev[i]).collect();
    let h: Vec<f64> = (0..n_h).map(|i| go[i] * c[i].tanh()).collect();
    (h, c)
}

fn run_direction(p: &LstmCellParams, steps: impl Iterator<Item = Vec<f64>>) -> DirCache {
    let n_h = p.hidden();
    let mut cache = DirCache::default();
    let mut h = vec![0.0; n_h];
    let mut c = vec![0.0; n_h];
    for x in steps {
        let cand = gate(&p.w_cx, &p.w_ch, &p.b_c, &x, &h, f64::tanh);
        let gu = gate(&p.w_ux, &p.w_uh, &p.b_u, &x, &h, sigmoid);
        let gf = gate(&p.w_fx, &p.w_fh, &p.b_f, &x, &h, sigmoid);
        let go = gate(&p.w_ox, &p.w_oh, &p.b_o, &x, &h, sigmoid);
        let c_new: Vec<f64> =
            (0..n_h).map(|i| gu[i] * cand[i] + gf[i] * c[i]).collect();
        let h_new: Vec<f64> = (0..n_h).map(|i| go[i] * c_new[i].tanh()).collect();
        cache.xs.push(x);
        cache.cands.push(cand);
        cache.gus.push(gu);
        cache.gfs.push(gf);
        cache.gos.push(go);
        cache.cs.push(c_new.clone());
        cache.hs.push(h_new.clone());
        h = h_new;
        c = c_new;
    }
    cache
}

impl Lstm {
    pub fn hidden_per_direction(&self) -> usize {
        self.fwd.hidden()
    }

    pub fn is_bidirectional(&self) -> bool {
        self.bwd.is_some()
    }

    pub fn output_width(&self) -> usize {
        self.fwd.hidden() * if self.is_bidirectional() { 2 } else { 1 }
    }

    pub fn forward(&self, x: &Tensor, layer_idx: usize) -> Result<(Tensor, LstmCache)> {
        if x.cols() != self.fwd.input() {
            return Err(NnError::ShapeMismatch {
                layer: layer_idx,
                detail: format!(
                    "lstm expects {} features, input has {}",
                    self.fwd.input(),
                    x.cols()
                ),
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
            let mut v = fwd.hs[t_steps - 1].clone();
            if let Some(b) = &bwd {
                v.extend_from_slice(&b.hs[t_steps - 1]);
            }
            Tensor::row_vector(v)
        } else {
            let mut out = Tensor::zeros(t_steps, self.output_width());
            for t in 0..t_steps {
                let row = out.row_mut(t);
                row[..n_h].copy_from_slice(&fwd.hs[t]);
                if let Some(b) = &bwd {
                    row[n_h..].copy_from_slice(&b.hs[t_steps - 1 - t]);
                }
            }
            out
        };
        Ok((out, LstmCache { fwd, bwd, in_rows: x.rows(), in_cols: x.cols() }))
    }

    fn backward_direction(
        p: &LstmCellParams,
        cache: &DirCache,
        grad_steps: &[Vec<f64>],
        grads: &mut [Vec<f64>],
        dx_steps: &mut [Vec<f64>],
        reversed: bool,
    ) {
        let t_steps = cache.xs.len();
        let n_h = p.hidden();
        let mut carry_h = vec![0.0; n_h];
        let mut carry_c = vec![0.0; n_h];
        for step in (0..t_steps).rev() {
            let input_index = if reversed { t_steps - 1 - step } else { step };
            let mut dh = carry_h.clone();
            let g_ext = &grad_steps[input_index];
            if !g_ext.is_empty() {
                for (a, b) in dh.iter_mut().zip(g_ext) {
                    *a += b;
                }
            }
            let cand = &cache.cands[step];
            let gu = &cache.gus[step];
            let gf = &cache.gfs[step];
            let go = &cache.gos[step];
            let c = &cache.cs[step];
            let c_prev: Vec<f64> =
                if step == 0 { vec![0.0; n_h] } else { cache.cs[step - 1].clone() };
            let h_prev: Vec<f64> =
                if step == 0 { vec![0.0; n_h] } else { cache.hs[step - 1].clone() };

            // h = go . tanh(c)
            let mut dgo = vec![0.0; n_h];
            let mut dc = carry_c.clone();
            for i in 0..n_h {
                let tc = c[i].tanh();
                dgo[i] = dh[i] * tc;
                dc[i] += dh[i] * go[i] * (1.0 - tc * tc);
            }
            // c = gu . cand + gf . c_prev
            let mut dgu = vec![0.0; n_h];
            let mut dcand = vec![0.0; n_h];
            let mut dgf = vec![0.0; n_h];
            let mut next_carry_c = vec![0.0; n_h];
            for i in 0..n_h {
                dgu[i] = dc[i] * cand[i];
                dcand[i] = dc[i] * gu[i];
                dgf[i] = dc[i] * c_prev[i];
                next_carry_c[i] = dc[i] * gf[i];
            }
            // Through the gate nonlinearities to pre-activations.
            let dz_c: Vec<f64> = (0..n_h).map(|i| dcand[i] * (1.0 - cand[i] * cand[i])).collect();
            let dz_u: Vec<f64> = (0..n_h).map(|i| dgu[i] * gu[i] * (1.0 - gu[i])).collect();
            let dz_f: Vec<f64> = (0..n_h).map(|i| dgf[i] * gf[i] * (1.0 - gf[i])).collect();
            let dz_o: Vec<f64> = (0..n_h).map(|i| dgo[i] * go[i] * (1.0 - go[i])).collect();

            let x = &cache.xs[step];
            let mut carry = vec![0.0; n_h];
            let dx = &mut dx_steps[input_index];
            for (gi, dz, wx, wh) in [
                (0usize, &dz_c, &p.w_cx, &p.w_ch),
                (3, &dz_u, &p.w_ux, &p.w_uh),
                (6, &dz_f, &p.w_fx, &p.w_fh),
                (9, &dz_o, &p.w_ox, &p.w_oh),
            ] {
                outer_acc(&mut grads[gi], dz, x);
                outer_acc(&mut grads[gi + 1], dz, &h_prev);
                for (g, d) in grads[gi + 2].iter_mut().zip(dz) {
                    *g += d;
                }
                matvec_t_acc(wh, dz, &mut carry);
                matvec_t_acc(wx, dz, dx);
            }
            carry_h = carry;
            carry_c = next_carry_c;
        }
    }

    pub fn backward(&self, cache: &LstmCache, grad_out: &Tensor, grads: &mut [Vec<f64>]) -> Tensor {
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
        let (fwd_slot, bwd_slot) = grads.split_at_mut(12);
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

    fn cell_meta(prefix: &str, p: &LstmCellParams) -> Vec<(String, usize, usize)> {
        vec![
            (format!("{prefix}.w_cx"), p.w_cx.rows(), p.w_cx.cols()),
            (format!("{prefix}.w_ch"), p.w_ch.rows(), p.w_ch.cols()),
            (format!("{prefix}.b_c"), p.b_c.len(), 1),
            (format!("{prefix}.w_ux"), p.w_ux.rows(), p.w_ux.cols()),
            (format!("{prefix}.w_uh"), p.w_uh.rows(), p.w_uh.cols()),
            (format!("{prefix}.b_u"), p.b_u.len(), 1),
            (format!("{prefix}.w_fx"), p.w_fx.rows(), p.w_fx.cols()),
            (format!("{prefix}.w_fh"), p.w_fh.rows(), p.w_fh.cols()),
            (format!("{prefix}.b_f"), p.b_f.len(), 1),
            (format!("{prefix}.w_ox"), p.w_ox.rows(), p.w_ox.cols()),
            (format!("{prefix}.w_oh"), p.w_oh.rows(), p.w_oh.cols()),
            (format!("{prefix}.b_o"), p.b_o.len(), 1),
        ]
    }

    pub fn param_meta(&self) -> Vec<(String, usize, usize)> {
        let mut v = Self::cell_meta("fwd", &self.fwd);
        if let Some(b) = &self.bwd {
            v.extend(Self::cell_meta("bwd", b));
        }
        v
    }

    fn cell_params(p: &LstmCellParams) -> Vec<&[f64]> {
        vec![
            p.w_cx.as_slice(),
            p.w_ch.as_slice(),
            &p.b_c,
            p.w_ux.as_slice(),
            p.w_uh.as_slice(),
            &p.b_u,
            p.w_fx.as_slice(),
            p.w_fh.as_slice(),
            &p.b_f,
            p.w_ox.as_slice(),
            p.w_oh.as_slice(),
            &p.b_o,
        ]
    }

    fn cell_params_mut(p: &mut LstmCellParams) -> Vec<&mut [f64]> {
        vec![
            p.w_cx.as_mut_slice(),
            p.w_ch.as_mut_slice(),
            &mut p.b_c,
            p.w_ux.as_mut_slice(),
            p.w_uh.as_mut_slice(),
            &mut p.b_u,
            p.w_fx.as_mut_slice(),
            p.w_fh.as_mut_slice(),
            &mut p.b_f,
            p.w_ox.as_mut_slice(),
            p.w_oh.as_mut_slice(),
            &mut p.b_o,
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
