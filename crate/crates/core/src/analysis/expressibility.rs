use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::model::qd_circuit;
use crate::model::qmf::ROTATIONS_PER_LAYER;
use crate::par::try_map_indexed;
use crate::qsim::{meyer_wallach, Axis, Circuit};

/// Every qubit carries its own stack of `layers` × (Rx, Ry, Rz, Rx, Ry, Rz)
/// rotations with free angles, followed by the defuzzifier's cluster CNOT
/// template. `angles` holds `qubits · layers · 6` values, qubit-major.
pub fn analysis_circuit(layers: usize, qubits: usize, angles: &[f64]) -> Result<Circuit> {
    let per_qubit = layers * ROTATIONS_PER_LAYER;
    if angles.len() != qubits * per_qubit {
        return invalid(format!("analysis circuit needs {} angles, got {}", qubits * per_qubit, angles.len()));
    }
    let mut c = Circuit::with_capacity(qubits, angles.len() + qubits + 1)?;
    for q in 0..qubits {
        for (j, &a) in angles[q * per_qubit..(q + 1) * per_qubit].iter().enumerate() {
            c.rotation(Axis::ALL[j % 3], q, a)?;
        }
    }
    // reuse the template by building it on zero Rx angles, which are identities
    for op in qd_circuit(&vec![0.0; qubits])?.ops() {
        if let crate::qsim::Op::Cnot { control, target } = *op {
            c.cnot(control, target)?;
        }
    }
    Ok(c)
}

/// Haar-random fidelity mass in each of `bins` equal bins on `[0, 1]` for
/// `n_qubits` qubits: the integral of `(N−1)(1−F)^{N−2}`.
pub fn haar_bin_masses(n_qubits: usize, bins: usize) -> Vec<f64> {
    let n = (1u64 << n_qubits) as f64;
    let cdf_tail = |f: f64| (1.0 - f).powf(n - 1.0);
    (0..bins)
        .map(|b| {
            let (lo, hi) = (b as f64 / bins as f64, (b + 1) as f64 / bins as f64);
            cdf_tail(lo) - cdf_tail(hi)
        })
        .collect()
}

/// Fraction of `values` in each of `bins` equal bins on `[0, 1]`; a value
/// of exactly 1 goes in the last bin.
pub fn fidelity_histogram(values: &[f64], bins: usize) -> Vec<f64> {
    let mut counts = vec![0usize; bins];
    for &v in values {
        let b = ((v.clamp(0.0, 1.0) * bins as f64) as usize).min(bins - 1);
        counts[b] += 1;
    }
    counts.iter().map(|&c| c as f64 / values.len() as f64).collect()
}

/// `Σ p ln(p/q)`, with empty `p` bins contributing 0. Infinite when some
/// bin has `p > 0` and `q = 0`.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(pi, _)| **pi > 0.0)
        .map(|(&pi, &qi)| if qi > 0.0 { pi * (pi / qi).ln() } else { f64::INFINITY })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExprOutcome {
    pub kl: f64,
    pub empirical: Vec<f64>,
    pub haar: Vec<f64>,
}

fn draw(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-PI..=PI)).collect()
}

/// Expressibility of an arbitrary parameterised circuit family: KL
/// divergence of the sampled pair-fidelity histogram from the Haar one.
pub fn expressibility_of<F>(n_qubits: usize, n_params: usize, n_pairs: usize, n_bins: usize, seed: u64, build: F) -> Result<ExprOutcome>
where
    F: Fn(&[f64]) -> Result<Circuit> + Sync + Send,
{
    if n_pairs < 1000 || n_bins < 10 {
        return invalid(format!("expressibility needs ≥ 1000 pairs and ≥ 10 bins, got {n_pairs} and {n_bins}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = (0..n_pairs).map(|_| (draw(&mut rng, n_params), draw(&mut rng, n_params))).collect();
    let fids = try_map_indexed(n_pairs, |i| {
        let a = build(&pairs[i].0)?.run();
        let b = build(&pairs[i].1)?.run();
        Ok(a.inner(&b)?.norm_sqr())
    })?;
    let empirical = fidelity_histogram(&fids, n_bins);
    let haar = haar_bin_masses(n_qubits, n_bins);
    Ok(ExprOutcome { kl: kl_divergence(&empirical, &haar), empirical, haar })
}

/// Mean Meyer–Wallach measure of the output over sampled parameters.
pub fn entangling_capability<F>(n_params: usize, n_samples: usize, seed: u64, build: F) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<Circuit> + Sync + Send,
{
    if n_samples < 100 {
        return invalid(format!("entangling capability needs ≥ 100 samples, got {n_samples}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params: Vec<Vec<f64>> = (0..n_samples).map(|_| draw(&mut rng, n_params)).collect();
    let q = try_map_indexed(n_samples, |i| meyer_wallach(&build(&params[i])?.run()))?;
    Ok(q.iter().sum::<f64>() / n_samples as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExprEntResult {
    pub layers: usize,
    pub qubits: usize,
    pub expressibility: Option<f64>,
    pub entanglement: Option<f64>,
    pub n_samples: usize,
    pub n_bins: usize,
    pub seed: u64,
}

pub fn expressibility_score(layers: usize, qubits: usize, n_pairs: usize, n_bins: usize, seed: u64) -> Result<ExprOutcome> {
    let n = qubits * layers * ROTATIONS_PER_LAYER;
    expressibility_of(qubits, n, n_pairs, n_bins, seed, |a| analysis_circuit(layers, qubits, a))
}

pub fn entangling_score(layers: usize, qubits: usize, n_samples: usize, seed: u64) -> Result<f64> {
    if qubits < 2 {
        return invalid(format!("entanglement needs at least 2 qubits, got {qubits}"));
    }
    let n = qubits * layers * ROTATIONS_PER_LAYER;
    entangling_capability(n, n_samples, seed, |a| analysis_circuit(layers, qubits, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_masses_are_a_distribution() {
        let h = haar_bin_masses(1, 20);
        assert!(h.iter().all(|&m| (m - 0.05).abs() < 1e-15));
        let h = haar_bin_masses(6, 75);
        assert!((h.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((kl_divergence(&h, &h)).abs() < 1e-12);
    }

    #[test]
    fn histogram_conserves_mass() {
        let v = [0.0, 0.1, 0.5, 0.99, 1.0, 1.0];
        let h = fidelity_histogram(&v, 10);
        assert!((h.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(h[9], 3.0 / 6.0);
    }

    #[test]
    fn kl_handles_empty_and_missing_bins() {
        assert_eq!(kl_divergence(&[0.0, 1.0], &[0.5, 0.5]), 2f64.ln());
        assert_eq!(kl_divergence(&[1.0, 0.0], &[0.0, 1.0]), f64::INFINITY);
    }

    #[test]
    fn analysis_circuit_shape() {
        let c = analysis_circuit(2, 6, &vec![0.3; 72]).unwrap();
        assert_eq!(c.single_qubit_gate_count(), 72);
        assert_eq!(c.cnot_count(), 7);
        assert!(analysis_circuit(2, 6, &[0.0; 3]).is_err());
    }

    #[test]
    fn no_cnots_means_no_entanglement() {
        let q = entangling_capability(3 * 6, 100, 4, |a| {
            let mut c = Circuit::new(3)?;
            for (j, &x) in a.iter().enumerate() {
                c.rotation(Axis::ALL[j % 3], j % 3, x)?;
            }
            Ok(c)
        })
        .unwrap();
        assert!(q.abs() < 1e-12);
        assert!(entangling_score(1, 1, 100, 0).is_err());
        assert!(expressibility_score(1, 3, 10, 75, 0).is_err());
    }
}
