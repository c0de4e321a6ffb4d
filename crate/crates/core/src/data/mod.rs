//! Dataset ingestion, normalisation, batching and the flat config format.

mod batches;
mod config_file;
mod dataset;
mod idx;

pub use batches::make_batches;
pub use config_file::{parse_config, ConfigEntry};
pub use dataset::Dataset;
pub use idx::{load_idx, parse_idx, IMAGE_MAGIC, LABEL_MAGIC, MNIST_SIDE};
