//! Hybrid quantum-fuzzy neural network (HQFNN) for image classification.
//!
//! The crate is organised bottom-up:
//!
//! * [`qsim`] – a small exact simulator (pure states, density matrices,
//!   Kraus channels, fidelity, Meyer–Wallach entanglement).
//! * [`grad`] – parameter-shift and finite-difference gradients plus the
//!   reverse-mode kernels for the classical layers.
//! * [`model`] – the forward pass: CNN stem, quantum membership functions,
//!   convolutional rule layer, quantum defuzzification and the classifier.
//! * [`train`] – cross-entropy, Adam, learning-rate milestones, metrics.
//! * [`analysis`] – noise robustness, expressibility, entangling capability
//!   and gate-count reports.
//! * [`data`] – IDX loading, normalisation, batching and the flat config
//!   file format.
//! * [`cli`] – the `hqfnn` command-line front end.
//!
//! Qubit 0 is the least significant bit of a basis-state index throughout.

pub mod analysis;
pub mod cli;
pub mod data;
pub mod error;
pub mod grad;
pub mod model;
mod par;
pub mod qsim;
pub mod train;

pub use error::{Error, Result};
