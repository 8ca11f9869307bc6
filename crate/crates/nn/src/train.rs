//! Mini-batch MSE training with a validation split; returns the snapshot
//! with the lowest validation loss over epochs.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

use crate::adam::{AdamConfig, AdamState};
use crate::error::{NnError, Result};
use crate::model::{Mode, Model};
use crate::tensor::Tensor;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub adam: AdamConfig,
    /// Fraction of the dataset held out for validation.
    pub val_fraction: f64,
    /// Drives shuffling, the validation split, and dropout masks.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 120,
            batch_size: 16,
            adam: AdamConfig::default(),
            val_fraction: 0.1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochStats {
    pub train_mse: f64,
    pub val_mse: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    pub history: Vec<EpochStats>,
    pub best_epoch: usize,
    pub best_val_mse: f64,
}

fn shuffle(indices: &mut [usize], rng: &mut ChaCha8Rng) {
    for i in (1..indices.len()).rev() {
        let j = rng.gen_range(0..=i);
        indices.swap(i, j);
    }
}

/// Trains in place; on return the model holds the best-validation weights.
pub fn train(
    model: &mut Model,
    inputs: &[Tensor],
    targets: &[[f64; 4]],
    cfg: &TrainConfig,
) -> Result<TrainReport> {
    if inputs.len() != targets.len() {
        return Err(NnError::InvalidParameter(format!(
            "{} inputs vs {} targets",
            inputs.len(),
            targets.len()
        )));
    }
    if cfg.batch_size == 0 || cfg.epochs == 0 {
        return Err(NnError::InvalidParameter("batch size and epochs must be positive".into()));
    }
    let n = inputs.len();
    let n_val = ((n as f64) * cfg.val_fraction).round() as usize;
    if n_val >= n || n - n_val < cfg.batch_size {
        return Err(NnError::DatasetTooSmall(format!(
            "{n} samples with {n_val} held out cannot fill a batch of {}",
            cfg.batch_size
        )));
    }

    let mut split_rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x511a5e);
    let mut order: Vec<usize> = (0..n).collect();
    shuffle(&mut order, &mut split_rng);
    let val_idx: Vec<usize> = order[n - n_val..].to_vec();
    let mut train_idx: Vec<usize> = order[..n - n_val].to_vec();

    let mut shuffle_rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x0eb0c4);
    let mut dropout_rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xd50f00);
    let mut adam = AdamState::new(model, cfg.adam);
    let mut history = Vec::with_capacity(cfg.epochs);
    let mut best_val = f64::INFINITY;
    let mut best_epoch = 0usize;
    let mut best_snapshot = model.snapshot();

    for epoch in 0..cfg.epochs {
        shuffle(&mut train_idx, &mut shuffle_rng);
        let mut train_loss = 0.0;
        let mut seen = 0usize;
        for batch in train_idx.chunks(cfg.batch_size) {
            let mut grads = model.zero_grads();
            let weight = 1.0 / batch.len() as f64;
            for &i in batch {
                let mut mode = Mode::Train(&mut dropout_rng);
                let (out, caches) = model.forward_cached(&inputs[i], &mut mode)?;
                let loss = Model::mse(&out, &targets[i]);
                if !loss.is_finite() {
                    return Err(NnError::NanLoss { epoch });
                }
                train_loss += loss;
                seen += 1;
                let grad_out = Model::mse_grad(&out, &targets[i], weight);
                model.backward(&caches, &grad_out, &mut grads);
            }
            adam.step(model, &grads);
        }
        let train_mse = train_loss / seen.max(1) as f64;

        let mut val_loss = 0.0;
        for &i in &val_idx {
            let out = model.forward(&inputs[i])?;
            val_loss += Model::mse(&out, &targets[i]);
        }
        let val_mse = val_loss / val_idx.len().max(1) as f64;
        if !val_mse.is_finite() {
            return Err(NnError::NanLoss { epoch });
        }
        if val_mse < best_val {
            best_val = val_mse;
            best_epoch = epoch;
            best_snapshot = model.snapshot();
        }
        history.push(EpochStats { train_mse, val_mse });
    }

    model.restore(&best_snapshot);
    Ok(TrainReport { history, best_epoch, best_val_mse: best_val })
}
