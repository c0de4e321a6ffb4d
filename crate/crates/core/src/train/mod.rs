//! End-to-end optimisation: cross-entropy, Adam, milestone decay,
//! best-validation checkpointing and classification metrics.

mod adam;
mod run;
mod metrics;

pub use adam::{adam_step, adam_update, AdamConfig, AdamState};
pub use run::{cross_entropy, evaluate, lr_schedule, train, train_with, write_metrics_csv, TrainConfig, TrainOutcome};
pub use metrics::{ClassMetrics, Confusion, MetricsRecord};
