//! The hybrid network: CNN stem → quantum membership functions → rule
//! convolution → quantum defuzzification → fused classifier.

mod checkpoint;
mod config;
mod network;
mod params;
pub mod qd;
pub mod qmf;
pub mod rule;
pub mod stem;

pub use checkpoint::{load_checkpoint, read_checkpoint, save_checkpoint, write_checkpoint, CHECKPOINT_MAGIC, CHECKPOINT_VERSION};
pub use config::ModelConfig;
pub use network::{
    backward_sample, batch_loss_and_grad, forward_sample, model_forward, predict, sample_loss_and_grad, SampleTrace,
};
pub use params::{Gradients, ModelParams, Slot};
pub use qd::{qd_circuit, qd_forward, QdParams};
pub use qmf::{qmf_circuit, qmf_forward, qmf_membership, MembershipTensor, QmfParams};
pub use rule::{rule_forward, RuleParams};
pub use stem::stem_forward;
