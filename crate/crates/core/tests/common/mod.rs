//! Helpers shared by the integration tests.
#![allow(dead_code)]

use hqfnn::grad::{relative_error, GradCheckReport, FD_STEP};
use hqfnn::grad::layers::SoftmaxCrossEntropy;
use hqfnn::model::{forward_sample, sample_loss_and_grad, ModelConfig, ModelParams, Slot};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn tiny_config() -> ModelConfig {
    ModelConfig { d: 2, m: 2, layers: 1, qubits: 3, head_split: 1, hidden: 4, n_classes: 3, image_size: 8 }
}

pub fn random_image(rng: &mut ChaCha8Rng, pixels: usize) -> Vec<f64> {
    (0..pixels).map(|_| rng.gen_range(-1.5..1.5)).collect()
}

fn loss_at(params: &ModelParams, image: &[f64], label: usize) -> f64 {
    let t = forward_sample(image, params).unwrap();
    SoftmaxCrossEntropy::forward(&t.logits, label).unwrap()
}

/// Compares every backprop/shift gradient of one random tiny model against
/// central finite differences of the loss.
pub fn tiny_model_gradient_check(seed: u64) -> GradCheckReport {
    let cfg = tiny_config();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = ModelParams::init(cfg, rng.gen()).unwrap();
    let image = random_image(&mut rng, cfg.pixels());
    let label = rng.gen_range(0..cfg.n_classes);
    let (_, grads) = sample_loss_and_grad(&image, label, &params).unwrap();
    let mut report = GradCheckReport::new(1e-3);
    for slot in Slot::ALL {
        for j in 0..params[slot].len() {
            let mut p = params.clone();
            let v = p[slot].values[j];
            p[slot].values[j] = v + FD_STEP;
            let up = loss_at(&p, &image, label);
            p[slot].values[j] = v - FD_STEP;
            let down = loss_at(&p, &image, label);
            let fd = (up - down) / (2.0 * FD_STEP);
            report.record(relative_error(grads[slot][j], fd));
        }
    }
    report
}

use hqfnn::qsim::{Axis, Circuit, Complex64, DensityMatrix, PureState};

pub fn random_state(rng: &mut ChaCha8Rng, n_qubits: usize) -> PureState {
    let amps: Vec<Complex64> =
        (0..1usize << n_qubits).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    PureState::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

/// Random mixture of `rank` random pure states.
pub fn random_density(rng: &mut ChaCha8Rng, n_qubits: usize, rank: usize) -> DensityMatrix {
    let dim = 1usize << n_qubits;
    let weights: Vec<f64> = (0..rank).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for w in weights {
        let s = random_state(rng, n_qubits);
        let a = s.amplitudes();
        for r in 0..dim {
            for c in 0..dim {
                entries[r * dim + c] += a[r] * a[c].conj() * (w / total);
            }
        }
    }
    DensityMatrix::from_entries(n_qubits, entries).unwrap()
}

pub fn random_circuit(rng: &mut ChaCha8Rng, n_qubits: usize, n_gates: usize) -> Circuit {
    let mut c = Circuit::new(n_qubits).unwrap();
    for _ in 0..n_gates {
        if n_qubits > 1 && rng.gen_bool(0.3) {
            let a = rng.gen_range(0..n_qubits);
            let b = (a + rng.gen_range(1..n_qubits)) % n_qubits;
            c.cnot(a, b).unwrap();
        } else {
            let axis = Axis::ALL[rng.gen_range(0..3)];
            c.rotation(axis, rng.gen_range(0..n_qubits), rng.gen_range(-10.0..10.0)).unwrap();
        }
    }
    c
}

/// `⟨ψ|σ|ψ⟩` computed from raw entries.
pub fn overlap(psi: &PureState, sigma: &DensityMatrix) -> f64 {
    let a = psi.amplitudes();
    let dim = a.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 0..dim {
        for c in 0..dim {
            acc += a[r].conj() * sigma.get(r, c) * a[c];
        }
    }
    acc.re
}

/// Meyer–Wallach measure from explicit single-qubit partial traces of the
/// amplitude vector.
pub fn meyer_wallach_oracle(psi: &PureState) -> f64 {
    let a = psi.amplitudes();
    let n = psi.n_qubits();
    let mut purity_sum = 0.0;
    for k in 0..n {
        // reduced 2×2 block: r[i][j] = Σ_rest a[rest with bit k = i] · conj(a[rest with bit k = j])
        let mut r = [[Complex64::new(0.0, 0.0); 2]; 2];
        for idx in 0..a.len() {
            if idx >> k & 1 == 1 {
                continue;
            }
            let pair = [a[idx], a[idx | 1 << k]];
            for i in 0..2 {
                for j in 0..2 {
                    r[i][j] += pair[i] * pair[j].conj();
                }
            }
        }
        purity_sum += r.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>();
    }
    2.0 * (1.0 - purity_sum / n as f64)
}

/// Fidelity of `psi` with itself after one application of `channel` on
/// every qubit in `qubits`.
pub fn fidelity_after_channel(psi: &PureState, channel: &hqfnn::qsim::NoiseChannel, qubits: &[usize]) -> f64 {
    let ideal = DensityMatrix::from_pure(psi);
    let mut noisy = ideal.clone();
    for &q in qubits {
        noisy.apply_channel(q, channel).unwrap();
    }
    hqfnn::qsim::state_fidelity(&ideal, &noisy).unwrap()
}

pub fn basis_superposition(n_qubits: usize, terms: &[usize]) -> PureState {
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
    let w = 1.0 / (terms.len() as f64).sqrt();
    for &t in terms {
        amps[t] = Complex64::new(w, 0.0);
    }
    PureState::from_amplitudes(amps).unwrap()
}
