use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::model::{qmf_circuit, QmfParams};
use crate::par::try_map_indexed;
use crate::qsim::{make_channel, state_fidelity, ChannelKind, Circuit, DensityMatrix, NoiseChannel};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseSweepResult {
    pub channel: ChannelKind,
    pub probability: f64,
    pub mean_fidelity: f64,
    pub inputs: Vec<f64>,
    pub fidelities: Vec<f64>,
}

/// Fidelity between the ideal output of `circuit` and its output with
/// `channel` applied after every single-qubit gate.
pub fn noise_fidelity(circuit: &Circuit, channel: &NoiseChannel) -> Result<f64> {
    let ideal = DensityMatrix::from_pure(&circuit.run());
    state_fidelity(&ideal, &circuit.run_noisy(channel)?)
}

/// `n` equally spaced inputs over `[0, 2π)`.
pub fn sweep_inputs(n: usize) -> Vec<f64> {
    (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
}

/// Mean fidelity of a single membership circuit (`layers` re-uploading
/// layers, parameters drawn uniformly from [−π, π] with `seed`) over
/// `n_inputs` inputs, for each probability in `probs`.
pub fn noise_sweep(kind: ChannelKind, probs: &[f64], n_inputs: usize, layers: usize, seed: u64) -> Result<Vec<NoiseSweepResult>> {
    if n_inputs < 2 {
        return invalid(format!("noise sweep needs at least 2 inputs, got {n_inputs}"));
    }
    let channels = probs.iter().map(|&p| make_channel(kind, p)).collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = layers * 3;
    let biases: Vec<f64> = (0..n).map(|_| rng.gen_range(-PI..=PI)).collect();
    let thetas: Vec<f64> = (0..n).map(|_| rng.gen_range(-PI..=PI)).collect();
    let params = QmfParams::new(1, layers, &biases, &thetas)?;
    let inputs = sweep_inputs(n_inputs);
    let circuits = inputs.iter().map(|&x| qmf_circuit(x, 0, &params)).collect::<Result<Vec<_>>>()?;
    channels
        .iter()
        .map(|ch| {
            let fidelities = try_map_indexed(circuits.len(), |j| noise_fidelity(&circuits[j], ch))?;
            Ok(NoiseSweepResult {
                channel: kind,
                probability: ch.probability(),
                mean_fidelity: fidelities.iter().sum::<f64>() / fidelities.len() as f64,
                inputs: inputs.clone(),
                fidelities,
            })
        })
        .collect()
}
