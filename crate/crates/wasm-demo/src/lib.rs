//! wasm-bindgen bindings for the static demo page in `www/`.
//!
//! Each export is a thin wrapper over a plain function that the native
//! tests call directly.

use std::f64::consts::PI;

use hqfnn::analysis::{entangling_score, expressibility_score, noise_sweep};
use hqfnn::model::{qmf_membership, QmfParams};
use hqfnn::qsim::ChannelKind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wasm_bindgen::prelude::*;

/// Upper bounds that keep a single call interactive in the browser.
pub const MAX_LAYERS: usize = 8;
pub const MAX_QUBITS: usize = 9;
pub const MAX_POINTS: usize = 2000;

fn check(what: &str, value: usize, lo: usize, hi: usize) -> Result<(), String> {
    if (lo..=hi).contains(&value) {
        Ok(())
    } else {
        Err(format!("{what} must be in {lo}..={hi}, got {value}"))
    }
}

/// Same draw order as the noise sweep: all biases, then all rotation angles.
fn membership_params(layers: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = layers * 3;
    let biases = (0..n).map(|_| rng.gen_range(-PI..=PI)).collect();
    let thetas = (0..n).map(|_| rng.gen_range(-PI..=PI)).collect();
    (biases, thetas)
}

/// Membership degree over `points` inputs spread evenly on [−π, π].
pub fn membership_curve_values(layers: usize, seed: u64, points: usize) -> Result<Vec<f64>, String> {
    check("layers", layers, 1, MAX_LAYERS)?;
    check("points", points, 2, MAX_POINTS)?;
    let (b, t) = membership_params(layers, seed);
    let params = QmfParams::new(1, layers, &b, &t).map_err(|e| e.to_string())?;
    (0..points)
        .map(|i| {
            let x = -PI + 2.0 * PI * i as f64 / (points - 1) as f64;
            qmf_membership(x, 0, &params).map_err(|e| e.to_string())
        })
        .collect()
}

/// Mean fidelity of the membership circuit under `channel` ("AD", "DP",
/// "BF" or "PF") for each probability in `probs`.
pub fn noise_curve_values(channel: &str, layers: usize, seed: u64, probs: &[f64]) -> Result<Vec<f64>, String> {
    check("layers", layers, 1, MAX_LAYERS)?;
    let kind: ChannelKind = channel.parse().map_err(|e: hqfnn::Error| e.to_string())?;
    let rows = noise_sweep(kind, probs, 20, layers, seed).map_err(|e| e.to_string())?;
    Ok(rows.iter().map(|r| r.mean_fidelity).collect())
}

/// `[kl, entanglement, empirical histogram…, Haar histogram…]` for the
/// analysis circuit.
pub fn circuit_stats_values(layers: usize, qubits: usize, bins: usize, seed: u64) -> Result<Vec<f64>, String> {
    check("layers", layers, 1, MAX_LAYERS)?;
    check("qubits", qubits, 3, MAX_QUBITS)?;
    check("bins", bins, 10, 100)?;
    let expr = expressibility_score(layers, qubits, 1000, bins, seed).map_err(|e| e.to_string())?;
    let ent = entangling_score(layers, qubits, 200, seed).map_err(|e| e.to_string())?;
    let mut out = vec![expr.kl, ent];
    out.extend(expr.empirical);
    out.extend(expr.haar);
    Ok(out)
}

#[wasm_bindgen]
pub fn membership_curve(layers: usize, seed: u32, points: usize) -> Result<Vec<f64>, JsError> {
    membership_curve_values(layers, seed.into(), points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn noise_curve(channel: &str, layers: usize, seed: u32, probs: Vec<f64>) -> Result<Vec<f64>, JsError> {
    noise_curve_values(channel, layers, seed.into(), &probs).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn circuit_stats(layers: usize, qubits: usize, bins: usize, seed: u32) -> Result<Vec<f64>, JsError> {
    circuit_stats_values(layers, qubits, bins, seed.into()).map_err(|e| JsError::new(&e))
}
