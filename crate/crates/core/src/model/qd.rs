//! Quantum defuzzification: project rule activations to rotation angles,
//! entangle in three-qubit clusters, measure, and mix two linear heads.

use std::f64::consts::FRAC_PI_2;

use crate::error::{invalid, Result};
use crate::grad::layers::Linear;
use crate::qsim::{Axis, Circuit};

use super::{ModelParams, Slot};

/// Borrowed view of the defuzzifier parameters.
#[derive(Debug, Clone, Copy)]
pub struct QdParams<'a> {
    pub qubits: usize,
    /// First head size `p`.
    pub split: usize,
    /// `[m·d][q]`.
    pub proj_weight: &'a [f64],
    pub proj_bias: &'a [f64],
    pub w1: &'a [f64],
    pub beta1: f64,
    pub w2: &'a [f64],
    pub beta2: f64,
}

impl<'a> QdParams<'a> {
    pub fn from_model(params: &'a ModelParams) -> Self {
        let c = params.config();
        Self {
            qubits: c.qubits,
            split: c.head_split,
            proj_weight: params.values(Slot::QdW),
            proj_bias: params.values(Slot::QdB),
            w1: params.values(Slot::HeadW1),
            beta1: params.values(Slot::HeadB1)[0],
            w2: params.values(Slot::HeadW2),
            beta2: params.values(Slot::HeadB2)[0],
        }
    }

    fn check(&self, n_in: usize) -> Result<Linear> {
        if self.qubits < 3 {
            return invalid(format!("the defuzzifier needs at least 3 qubits, got {}", self.qubits));
        }
        if self.split == 0 || self.split >= self.qubits {
            return invalid(format!("head split must lie in [1, {}), got {}", self.qubits, self.split));
        }
        if self.w1.len() != self.split || self.w2.len() != self.qubits - self.split {
            return invalid("head weight lengths do not match the split");
        }
        let proj = Linear { n_in, n_out: self.qubits };
        if self.proj_weight.len() != n_in * self.qubits || self.proj_bias.len() != self.qubits {
            return invalid(format!("projection expects {n_in}×{} weights", self.qubits));
        }
        Ok(proj)
    }
}

/// `Rx(θᵢ)` on every qubit, then the cluster CNOT template.
pub fn qd_circuit(angles: &[f64]) -> Result<Circuit> {
    let q = angles.len();
    if q < 3 {
        return invalid(format!("the defuzzifier needs at least 3 qubits, got {q}"));
    }
    let mut c = Circuit::new(q)?;
    for (i, &a) in angles.iter().enumerate() {
        c.rotation(Axis::X, i, a)?;
    }
    let clusters = q / 3;
    for j in 0..clusters {
        let (a, b, t) = (3 * j, 3 * j + 1, 3 * j + 2);
        c.cnot(a, b)?.cnot(b, t)?.cnot(t, a)?;
    }
    if clusters >= 1 {
        c.cnot(3 * clusters - 1, 0)?;
    }
    Ok(c)
}

fn measure(c: &Circuit, shift: Option<(usize, f64)>) -> Vec<f64> {
    let state = c.run_shifted(shift);
    (0..c.n_qubits()).map(|i| (state.expectation_z_unchecked(i) + 1.0) / 2.0).collect()
}

/// Per-qubit measurements `mᵢ = (⟨Zᵢ⟩ + 1) / 2`.
pub fn qd_measurements(angles: &[f64]) -> Result<Vec<f64>> {
    Ok(measure(&qd_circuit(angles)?, None))
}

/// Crisp output `((m⁽¹⁾·w₁ + β₁) + (m⁽²⁾·w₂ + β₂)) / 2`.
pub fn qd_combine(meas: &[f64], params: &QdParams) -> f64 {
    let (m1, m2) = meas.split_at(params.split);
    let h1: f64 = m1.iter().zip(params.w1).map(|(a, b)| a * b).sum::<f64>() + params.beta1;
    let h2: f64 = m2.iter().zip(params.w2).map(|(a, b)| a * b).sum::<f64>() + params.beta2;
    (h1 + h2) / 2.0
}

/// Values of one sample, kept for the backward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct QdTrace {
    /// Flattened rule activations, `[m·d]`.
    pub input: Vec<f64>,
    pub angles: Vec<f64>,
    pub measurements: Vec<f64>,
    pub output: f64,
}

pub fn qd_sample(rules: &[f64], params: &QdParams) -> Result<QdTrace> {
    let proj = params.check(rules.len())?;
    let angles = proj.forward(params.proj_weight, params.proj_bias, rules)?;
    let measurements = qd_measurements(&angles)?;
    let output = qd_combine(&measurements, params);
    Ok(QdTrace { input: rules.to_vec(), angles, measurements, output })
}

/// Crisp outputs for a batch of flattened `[m][d]` rule activations.
pub fn qd_forward(rules: &[Vec<f64>], params: &QdParams) -> Result<Vec<f64>> {
    rules.iter().map(|r| qd_sample(r, params).map(|t| t.output)).collect()
}

pub struct QdGrads {
    pub input: Vec<f64>,
    pub proj_weight: Vec<f64>,
    pub proj_bias: Vec<f64>,
    pub w1: Vec<f64>,
    pub beta1: f64,
    pub w2: Vec<f64>,
    pub beta2: f64,
}

/// Gradients of `upstream · ŷ`. Angle derivatives of every measurement use
/// the two-point shift rule on the Rx gates.
pub fn qd_backward(trace: &QdTrace, params: &QdParams, upstream: f64) -> Result<QdGrads> {
    let proj = params.check(trace.input.len())?;
    let p = params.split;
    let half = upstream / 2.0;
    let w1 = trace.measurements[..p].iter().map(|m| half * m).collect();
    let w2 = trace.measurements[p..].iter().map(|m| half * m).collect();
    let d_meas: Vec<f64> = params.w1.iter().chain(params.w2).map(|w| half * w).collect();

    let c = qd_circuit(&trace.angles)?;
    let mut d_angles = vec![0.0; params.qubits];
    if d_meas.iter().any(|&g| g != 0.0) {
        for (j, slot) in d_angles.iter_mut().enumerate() {
            // op j is the Rx on qubit j
            let plus = measure(&c, Some((j, FRAC_PI_2)));
            let minus = measure(&c, Some((j, -FRAC_PI_2)));
            *slot = plus.iter().zip(&minus).zip(&d_meas).map(|((a, b), g)| g * (a - b) / 2.0).sum();
        }
    }
    let g = proj.backward(params.proj_weight, &trace.input, &d_angles, true)?;
    Ok(QdGrads { input: g.input, proj_weight: g.weight, proj_bias: g.bias, w1, beta1: half, w2, beta2: half })
}
