//! Training loop: linearly decaying Adam over shuffled mini-batches, with
//! the batch size picked by trying each candidate and keeping the run whose
//! final epoch has the smallest mean training loss.

use ndarray::{Array2, Axis};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::adam::{adam_step, AdamParams, AdamState};
use super::DenseMlpModel;
use crate::error::{Error, Result};
use crate::preprocess::{SampleRow, INPUT_WIDTH, TARGET_HOURS};

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    /// Learning rate of the first epoch; it decays linearly to lr0/epochs at
    /// the last one.
    pub lr0: f64,
    /// Batch sizes to try; the best final-epoch loss wins, ties going to the
    /// earlier candidate.
    pub batch_candidates: Vec<usize>,
    /// Hidden width used when no initial model is supplied.
    pub d_hidden: usize,
    pub seed: u64,
    pub adam: AdamParams,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 128,
            lr0: 0.0005,
            batch_candidates: vec![8192, 16384],
            d_hidden: 4096,
            seed: 0,
            adam: AdamParams::default(),
        }
    }
}

/// Mean training loss per epoch of the winning run.
#[derive(Debug, Clone, PartialEq)]
pub struct LossReport {
    pub batch_size: usize,
    pub epoch_losses: Vec<f64>,
}

impl LossReport {
    pub fn final_loss(&self) -> Option<f64> {
        self.epoch_losses.last().copied()
    }
}

/// Learning rate of epoch `e`: `lr0 * (1 - e / epochs)`.
pub fn lr_at_epoch(lr0: f64, epochs: usize, epoch: usize) -> f64 {
    assert!(epochs > 0, "epochs must be positive");
    assert!(
        epoch < epochs,
        "epoch {epoch} out of range for {epochs} epochs"
    );
    lr0 * (1.0 - epoch as f64 / epochs as f64)
}

/// Fits a model to training rows.
///
/// Starts from `init` when given (a warm start; Adam state starts fresh),
/// otherwise from a seeded random model of width `config.d_hidden`. With
/// `epochs = 0` the starting model is returned untouched. The whole run is
/// deterministic in (row order, config, init).
pub fn train(
    rows: &[SampleRow],
    config: &TrainConfig,
    init: Option<&DenseMlpModel>,
) -> Result<(DenseMlpModel, LossReport)> {
    if rows.is_empty() {
        return Err(Error::Train("no training rows".into()));
    }
    if config.batch_candidates.is_empty() {
        return Err(Error::Config("batch_sizes must not be empty".into()));
    }
    if config.batch_candidates.iter().any(|&b| b == 0) {
        return Err(Error::Config("batch sizes must be positive".into()));
    }
    if !(config.lr0 > 0.0) {
        return Err(Error::Config(format!(
            "lr0 must be positive, got {}",
            config.lr0
        )));
    }
    if let Some(m) = init {
        let (d_in, _, d_out) = m.dims();
        if d_in != INPUT_WIDTH || d_out != TARGET_HOURS {
            return Err(Error::Train(format!(
                "initial model has dimensions {d_in}x{d_out}, expected {INPUT_WIDTH}x{TARGET_HOURS}"
            )));
        }
    }

    let n = rows.len();
    let mut x = Array2::zeros((n, INPUT_WIDTH));
    let mut y = Array2::zeros((n, TARGET_HOURS));
    for (r, row) in rows.iter().enumerate() {
        let target = row.scaled_target().ok_or_else(|| {
            Error::Train(format!(
                "row for {} {} {} at {} has no target",
                row.origin.cell_id, row.origin.tech, row.origin.indicator, row.origin.window_start
            ))
        })?;
        if target.iter().sum::<f64>() <= 0.0 {
            return Err(Error::Train(format!(
                "row for {} {} {} at {} has a zero-mean target",
                row.origin.cell_id, row.origin.tech, row.origin.indicator, row.origin.window_start
            )));
        }
        let input = row.input_vector();
        for (c, v) in input.iter().enumerate() {
            x[[r, c]] = *v;
        }
        for (c, v) in target.iter().enumerate() {
            y[[r, c]] = *v;
        }
    }

    let mut best: Option<(f64, DenseMlpModel, LossReport)> = None;
    for &batch_size in &config.batch_candidates {
        let mut model = match init {
            Some(m) => m.clone(),
            None => DenseMlpModel::new_random(INPUT_WIDTH, config.d_hidden, TARGET_HOURS, config.seed),
        };
        let mut adam_state = AdamState::new(&model);
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut indices: Vec<usize> = (0..n).collect();
        let mut epoch_losses = Vec::with_capacity(config.epochs);

        for epoch in 0..config.epochs {
            let lr = lr_at_epoch(config.lr0, config.epochs, epoch);
            indices.shuffle(&mut rng);
            let mut loss_sum = 0.0;
            for batch in indices.chunks(batch_size) {
                let xb = x.select(Axis(0), batch);
                let yb = y.select(Axis(0), batch);
                let cache = model.forward_batch(&xb);
                let (batch_loss, grads) = model.backward(&cache, &yb)?;
                if !batch_loss.is_finite() {
                    return Err(Error::Train(format!(
                        "non-finite loss at epoch {epoch} (batch size {batch_size}); \
                         try a smaller lr0"
                    )));
                }
                loss_sum += batch_loss * batch.len() as f64;
                adam_step(&mut model, &grads, &mut adam_state, lr, &config.adam);
            }
            epoch_losses.push(loss_sum / n as f64);
        }

        let final_loss = epoch_losses.last().copied().unwrap_or(f64::INFINITY);
        let report = LossReport {
            batch_size,
            epoch_losses,
        };
        match &best {
            Some((best_loss, _, _)) if final_loss >= *best_loss => {}
            _ => best = Some((final_loss, model, report)),
        }
    }

    let (_, model, report) = best.expect("at least one batch candidate");
    Ok((model, report))
}
