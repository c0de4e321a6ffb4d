use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{adam_step, AdamConfig, AdamState, Confusion, MetricsRecord};
use crate::data::{make_batches, Dataset};
use crate::error::{invalid, Result};
use crate::grad::layers::SoftmaxCrossEntropy;
use crate::model::{batch_loss_and_grad, model_forward, predict, ModelParams};

/// Images evaluated per forward call during evaluation.
const EVAL_CHUNK: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub batch_size: usize,
    pub lr0: f64,
    pub epochs: usize,
    /// Epochs after which the learning rate is multiplied by 0.1.
    /// Milestones outside `1..=epochs` never fire.
    pub milestones: Vec<usize>,
    pub adam: AdamConfig,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self { batch_size: 500, lr0: 1e-3, epochs: 200, milestones: vec![100, 150], adam: AdamConfig::default(), seed: 0 }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 || self.epochs == 0 {
            return invalid("batch size and epoch count must be at least 1");
        }
        if !(self.lr0 >= 0.0 && self.lr0.is_finite()) {
            return invalid(format!("learning rate must be finite and non-negative, got {}", self.lr0));
        }
        let a = &self.adam;
        if !(0.0..1.0).contains(&a.beta1) || !(0.0..1.0).contains(&a.beta2) || a.eps <= 0.0 {
            return invalid("Adam needs betas in [0, 1) and a positive epsilon");
        }
        Ok(())
    }
}

/// Learning rate used during each epoch `1..=epochs`: `lr0` decayed by
/// 0.1 for every milestone already passed.
pub fn lr_schedule(cfg: &TrainConfig) -> Vec<f64> {
    (1..=cfg.epochs)
        .map(|t| {
            let passed = cfg.milestones.iter().filter(|&&m| m >= 1 && m < t && m <= cfg.epochs).count();
            cfg.lr0 * 0.1f64.powi(passed as i32)
        })
        .collect()
}

/// Mean cross-entropy of a batch of logits.
pub fn cross_entropy(logits: &[Vec<f64>], labels: &[usize]) -> Result<f64> {
    if logits.is_empty() || logits.len() != labels.len() {
        return invalid(format!("need matching non-empty logits and labels, got {} and {}", logits.len(), labels.len()));
    }
    let mut total = 0.0;
    for (z, &y) in logits.iter().zip(labels) {
        total += SoftmaxCrossEntropy::forward(z, y)?;
    }
    Ok(total / logits.len() as f64)
}

/// Loss and macro metrics of `params` on `data`. The record's epoch is 0.
pub fn evaluate(params: &ModelParams, data: &Dataset) -> Result<MetricsRecord> {
    if data.is_empty() {
        return invalid("cannot evaluate on an empty dataset");
    }
    let mut logits = Vec::with_capacity(data.len());
    for lo in (0..data.len()).step_by(EVAL_CHUNK) {
        let imgs: Vec<&[f64]> = (lo..(lo + EVAL_CHUNK).min(data.len())).map(|i| data.image(i)).collect();
        logits.extend(model_forward(&imgs, params)?);
    }
    let loss = cross_entropy(&logits, data.labels())?;
    Ok(Confusion::new(data.labels(), &predict(&logits)).record(0, loss))
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    /// Parameters with the best validation accuracy (earliest on ties).
    pub best: ModelParams,
    pub best_epoch: usize,
    /// Parameters after the final epoch.
    pub last: ModelParams,
    /// Per epoch: mean training loss and validation metrics.
    pub history: Vec<MetricsRecord>,
    pub lr_history: Vec<f64>,
}

pub fn train(train_set: &Dataset, val_set: &Dataset, params: ModelParams, cfg: &TrainConfig) -> Result<TrainOutcome> {
    train_with(train_set, val_set, params, cfg, |_, _| {})
}

/// Like [`train`], calling `on_epoch(record, lr)` after every epoch.
pub fn train_with(
    train_set: &Dataset,
    val_set: &Dataset,
    mut params: ModelParams,
    cfg: &TrainConfig,
    mut on_epoch: impl FnMut(&MetricsRecord, f64),
) -> Result<TrainOutcome> {
    cfg.validate()?;
    if train_set.is_empty() || val_set.is_empty() {
        return invalid("training and validation sets must be non-empty");
    }
    let size = params.config().image_size;
    if train_set.image_size() != size || val_set.image_size() != size {
        return invalid(format!("model expects {size}×{size} images"));
    }
    let n_classes = params.config().n_classes;
    if train_set.num_classes() > n_classes || val_set.num_classes() > n_classes {
        return invalid(format!("labels exceed the model's {n_classes} classes"));
    }

    let lr_history = lr_schedule(cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut state = AdamState::new(&params);
    let mut history = Vec::with_capacity(cfg.epochs);
    let mut best = (params.clone(), 0, f64::NEG_INFINITY);

    for (e, &lr) in lr_history.iter().enumerate() {
        let batches = make_batches(train_set.len(), cfg.batch_size, rng.gen(), true)?;
        let mut loss_sum = 0.0;
        for batch in &batches {
            let imgs: Vec<&[f64]> = batch.iter().map(|&i| train_set.image(i)).collect();
            let labels: Vec<usize> = batch.iter().map(|&i| train_set.labels()[i]).collect();
            let (loss, grads) = batch_loss_and_grad(&imgs, &labels, &params)?;
            loss_sum += loss * batch.len() as f64;
            params.set_grads(&grads);
            adam_step(&mut params, &mut state, lr, &cfg.adam)?;
        }
        if !params.is_finite() {
            return Err(crate::Error::Consistency(format!("parameters diverged in epoch {}", e + 1)));
        }
        let val = evaluate(&params, val_set)?;
        let record = MetricsRecord { epoch: e + 1, loss: loss_sum / train_set.len() as f64, ..val };
        if record.accuracy > best.2 {
            best = (params.clone(), e + 1, record.accuracy);
        }
        on_epoch(&record, lr);
        history.push(record);
    }
    Ok(TrainOutcome { best: best.0, best_epoch: best.1, last: params, history, lr_history })
}

/// Writes `epoch,loss,acc,precision,recall,f1` rows.
pub fn write_metrics_csv<W: Write>(mut w: W, history: &[MetricsRecord]) -> Result<()> {
    writeln!(w, "epoch,loss,acc,precision,recall,f1")?;
    for r in history {
        writeln!(w, "{},{},{},{},{},{}", r.epoch, r.loss, r.accuracy, r.precision, r.recall, r.f1)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelConfig;

    #[test]
    fn schedule_decays_after_milestone() {
        let cfg = TrainConfig { epochs: 3, milestones: vec![2], lr0: 0.5, ..TrainConfig::default() };
        let lr = lr_schedule(&cfg);
        assert_eq!(lr[..2], [0.5, 0.5]);
        assert!((lr[2] - 0.05).abs() < 1e-15);
        // default milestones lie beyond a short run
        let short = TrainConfig { epochs: 10, ..TrainConfig::default() };
        assert!(lr_schedule(&short).iter().all(|&l| l == 1e-3));
    }

    #[test]
    fn cross_entropy_cases() {
        assert!((cross_entropy(&[vec![0.0; 10]], &[4]).unwrap() - 10f64.ln()).abs() < 1e-12);
        assert!(cross_entropy(&[vec![0.0; 3]], &[3]).is_err());
        assert!(cross_entropy(&[], &[]).is_err());
    }

    #[test]
    fn zero_lr_keeps_initialisation() {
        let cfg = ModelConfig { d: 2, m: 2, layers: 1, qubits: 3, head_split: 1, hidden: 4, n_classes: 2, image_size: 4 };
        let params = ModelParams::init(cfg, 3).unwrap();
        let pixels: Vec<f64> = (0..6 * 16).map(|i| ((i * 7) % 11) as f64 / 10.0).collect();
        let ds = Dataset::from_scaled("t", 4, pixels, vec![0, 1, 0, 1, 1, 0]).unwrap();
        let tc = TrainConfig { epochs: 1, lr0: 0.0, batch_size: 4, ..TrainConfig::default() };
        let out = train(&ds, &ds, params.clone(), &tc).unwrap();
        assert_eq!(out.best.tensors().iter().map(|t| &t.values).collect::<Vec<_>>(), params.tensors().iter().map(|t| &t.values).collect::<Vec<_>>());
        assert_eq!(out.history.len(), 1);
        let empty = ds.select(&[]).unwrap();
        assert!(train(&empty, &ds, params, &tc).is_err());
    }
}
