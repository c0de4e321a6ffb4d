//! Batch studies of the quantum blocks: noise robustness, expressibility,
//! entangling capability and resource counts.

mod expressibility;
mod gates;
mod noise;

pub use expressibility::{
    analysis_circuit, entangling_capability, entangling_score, expressibility_of, expressibility_score, fidelity_histogram,
    haar_bin_masses, kl_divergence, ExprEntResult, ExprOutcome,
};
pub use gates::{gate_count_report, GateCountReport};
pub use noise::{noise_fidelity, noise_sweep, sweep_inputs, NoiseSweepResult};
