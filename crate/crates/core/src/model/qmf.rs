//! Quantum membership functions: one qubit per (rule, feature) pair with
//! data re-uploading in every layer.

use crate::error::{check_index, invalid, Result};
use crate::grad::param_shift_grad;
use crate::par::try_map_indexed;
use crate::qsim::{Axis, Circuit};

use super::{ModelParams, Slot};

/// Rotations per re-uploading layer: three encodings then three trainable.
pub const ROTATIONS_PER_LAYER: usize = 6;

/// Borrowed view of the membership-function parameters. `biases` and
/// `thetas` are laid out `[m][layers][3]` with axis order X, Y, Z.
#[derive(Debug, Clone, Copy)]
pub struct QmfParams<'a> {
    m: usize,
    layers: usize,
    biases: &'a [f64],
    thetas: &'a [f64],
}

impl<'a> QmfParams<'a> {
    pub fn new(m: usize, layers: usize, biases: &'a [f64], thetas: &'a [f64]) -> Result<Self> {
        if m == 0 || layers == 0 {
            return invalid("membership functions need m ≥ 1 and at least one layer");
        }
        let len = m * layers * 3;
        if biases.len() != len || thetas.len() != len {
            return invalid(format!(
                "membership parameters need {len} biases and thetas, got {} and {}",
                biases.len(),
                thetas.len()
            ));
        }
        Ok(Self { m, layers, biases, thetas })
    }

    pub fn from_model(params: &'a ModelParams) -> Self {
        let c = params.config();
        Self { m: c.m, layers: c.layers, biases: params.values(Slot::QmfBias), thetas: params.values(Slot::QmfTheta) }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    fn rule_slices(&self, rule: usize) -> (&'a [f64], &'a [f64]) {
        let n = self.layers * 3;
        (&self.biases[rule * n..(rule + 1) * n], &self.thetas[rule * n..(rule + 1) * n])
    }
}

/// Builds the membership circuit of rule `rule` for input `x`.
pub fn qmf_circuit(x: f64, rule: usize, params: &QmfParams) -> Result<Circuit> {
    check_index(rule, params.m)?;
    let (bias, theta) = params.rule_slices(rule);
    let mut c = Circuit::with_capacity(1, ROTATIONS_PER_LAYER * params.layers)?;
    for l in 0..params.layers {
        for (a, axis) in Axis::ALL.into_iter().enumerate() {
            c.rotation(axis, 0, x + bias[l * 3 + a])?;
        }
        for (a, axis) in Axis::ALL.into_iter().enumerate() {
            c.rotation(axis, 0, theta[l * 3 + a])?;
        }
    }
    Ok(c)
}

fn membership_of(c: &Circuit, shift: Option<(usize, f64)>) -> f64 {
    (c.run_shifted(shift).expectation_z_unchecked(0) + 1.0) / 2.0
}

/// Membership degree `(⟨Z⟩ + 1) / 2` of `x` under rule `rule`.
pub fn qmf_membership(x: f64, rule: usize, params: &QmfParams) -> Result<f64> {
    Ok(membership_of(&qmf_circuit(x, rule, params)?, None))
}

/// Membership degree together with its parameter-shift derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct QmfGradient {
    pub mu: f64,
    /// dμ/d bias, laid out `[layers][3]`.
    pub d_bias: Vec<f64>,
    /// dμ/d θ, laid out `[layers][3]`.
    pub d_theta: Vec<f64>,
    /// dμ/dx: the sum of the encoding-gate derivatives.
    pub d_x: f64,
}

pub fn qmf_gradient(x: f64, rule: usize, params: &QmfParams) -> Result<QmfGradient> {
    let c = qmf_circuit(x, rule, params)?;
    let n = params.layers * 3;
    let mut d_bias = vec![0.0; n];
    let mut d_theta = vec![0.0; n];
    let mut d_x = 0.0;
    for j in 0..ROTATIONS_PER_LAYER * params.layers {
        // differentiate with respect to an offset added to gate j's angle
        let g = param_shift_grad(|delta| membership_of(&c, Some((j, delta))), 0.0);
        let (l, s) = (j / ROTATIONS_PER_LAYER, j % ROTATIONS_PER_LAYER);
        if s < 3 {
            d_bias[l * 3 + s] = g;
            d_x += g;
        } else {
            d_theta[l * 3 + s - 3] = g;
        }
    }
    Ok(QmfGradient { mu: membership_of(&c, None), d_bias, d_theta, d_x })
}

/// Membership degrees for a batch, `values[b][i][k]` flattened row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipTensor {
    pub batch: usize,
    pub m: usize,
    pub d: usize,
    pub values: Vec<f64>,
}

impl MembershipTensor {
    pub fn get(&self, b: usize, rule: usize, feature: usize) -> f64 {
        self.values[(b * self.m + rule) * self.d + feature]
    }

    /// The `[m][d]` block of sample `b`.
    pub fn sample(&self, b: usize) -> &[f64] {
        let n = self.m * self.d;
        &self.values[b * n..(b + 1) * n]
    }
}

/// Memberships `[m][d]` of one feature vector.
pub fn qmf_sample(features: &[f64], params: &QmfParams) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(params.m * features.len());
    for i in 0..params.m {
        for &x in features {
            out.push(qmf_membership(x, i, params)?);
        }
    }
    Ok(out)
}

/// Applies every membership function to every feature of every sample.
pub fn qmf_forward(features: &[Vec<f64>], params: &QmfParams) -> Result<MembershipTensor> {
    let d = features.first().map_or(0, Vec::len);
    if features.iter().any(|f| f.len() != d) {
        return invalid("all feature vectors in a batch must have the same length");
    }
    let blocks = try_map_indexed(features.len(), |b| qmf_sample(&features[b], params))?;
    Ok(MembershipTensor { batch: features.len(), m: params.m, d, values: blocks.concat() })
}
