//! Adam optimizer with bias correction.

use crate::model::{Grads, Model};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self { lr: 5e-4, beta1: 0.85, beta2: 0.999, epsilon: 1e-8 }
    }
}

/// First/second moment estimates shaped like the model parameters.
#[derive(Debug, Clone)]
pub struct AdamState {
    cfg: AdamConfig,
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    step: u64,
}

impl AdamState {
    pub fn new(model: &Model, cfg: AdamConfig) -> Self {
        let shapes: Vec<usize> = model
            .layers
            .iter()
            .flat_map(|l| l.params().into_iter().map(|p| p.len()))
            .collect();
        Self {
            cfg,
            m: shapes.iter().map(|&n| vec![0.0; n]).collect(),
            v: shapes.iter().map(|&n| vec![0.0; n]).collect(),
            step: 0,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    /// One update over all parameters with the given gradients.
    pub fn step(&mut self, model: &mut Model, grads: &Grads) {
        self.step += 1;
        let t = self.step as i32;
        let c = self.cfg;
        let bc1 = 1.0 - c.beta1.powi(t);
        let bc2 = 1.0 - c.beta2.powi(t);
        let mut slot = 0usize;
        for (layer, layer_grads) in model.layers.iter_mut().zip(grads) {
            for (p, g) in layer.params_mut().into_iter().zip(layer_grads) {
                let m = &mut self.m[slot];
                let v = &mut self.v[slot];
                for i in 0..p.len() {
                    m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
                    v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
                    let m_hat = m[i] / bc1;
                    let v_hat = v[i] / bc2;
                    p[i] -= c.lr * m_hat / (v_hat.sqrt() + c.epsilon);
                }
                slot += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activation::Activation;
    use crate::layers::Dense;
    use crate::model::Layer;
    use crate::tensor::Tensor;

    fn toy_model() -> Model {
        Model::new(vec![Layer::Dense(Dense {
            w: Tensor::from_vec(1, 1, vec![0.5]),
            b: vec![0.1],
            act: Activation::Linear,
        })])
    }

    #[test]
    fn zero_gradient_leaves_parameters_unchanged() {
        let mut model = toy_model();
        let before = model.snapshot();
        let mut adam = AdamState::new(&model, AdamConfig::default());
        let grads = model.zero_grads();
        adam.step(&mut model, &grads);
        assert_eq!(model.snapshot(), before);
        assert_eq!(adam.step_count(), 1);
    }

    #[test]
    fn first_step_moves_by_lr_against_gradient_sign() {
        let mut model = toy_model();
        let cfg = AdamConfig::default();
        let mut adam = AdamState::new(&model, cfg);
        let mut grads = model.zero_grads();
        grads[0][0][0] = 3.7; // constant scalar gradient
        grads[0][1][0] = -0.2;
        adam.step(&mut model, &grads);
        let snap = model.snapshot();
        // After bias correction the first update is lr * g/|g| up to epsilon.
        assert!((snap[0][0] - (0.5 - cfg.lr)).abs() < 1e-9, "w: {}", snap[0][0]);
        assert!((snap[1][0] - (0.1 + cfg.lr)).abs() < 1e-9, "b: {}", snap[1][0]);
    }

    #[test]
    fn defaults_match_training_protocol() {
        let cfg = AdamConfig::default();
        assert_eq!(cfg.lr, 5e-4);
        assert_eq!(cfg.beta1, 0.85);
        assert_eq!(cfg.beta2, 0.999);
        assert_eq!(cfg.epsilon, 1e-8);
    }
}
