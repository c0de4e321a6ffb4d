use std::f64::consts::PI;
use std::ops::{Index, IndexMut};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ModelConfig;
use crate::error::{invalid, Result};
use crate::grad::ParamTensor;

/// Position of each parameter tensor in module order. Checkpoints, the
/// optimizer and gradient buffers all use this order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Conv1W,
    Conv1B,
    Conv2W,
    Conv2B,
    StemW,
    StemB,
    QmfBias,
    QmfTheta,
    RuleW,
    RuleB,
    QdW,
    QdB,
    HeadW1,
    HeadB1,
    HeadW2,
    HeadB2,
    Fc1W,
    Fc1B,
    Fc2W,
    Fc2B,
}

impl Slot {
    pub const COUNT: usize = 20;

    pub const ALL: [Slot; Self::COUNT] = [
        Slot::Conv1W,
        Slot::Conv1B,
        Slot::Conv2W,
        Slot::Conv2B,
        Slot::StemW,
        Slot::StemB,
        Slot::QmfBias,
        Slot::QmfTheta,
        Slot::RuleW,
        Slot::RuleB,
        Slot::QdW,
        Slot::QdB,
        Slot::HeadW1,
        Slot::HeadB1,
        Slot::HeadW2,
        Slot::HeadB2,
        Slot::Fc1W,
        Slot::Fc1B,
        Slot::Fc2W,
        Slot::Fc2B,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Slot::Conv1W => "conv1.weight",
            Slot::Conv1B => "conv1.bias",
            Slot::Conv2W => "conv2.weight",
            Slot::Conv2B => "conv2.bias",
            Slot::StemW => "stem_fc.weight",
            Slot::StemB => "stem_fc.bias",
            Slot::QmfBias => "qmf.bias",
            Slot::QmfTheta => "qmf.theta",
            Slot::RuleW => "rule.kernel",
            Slot::RuleB => "rule.bias",
            Slot::QdW => "qd.proj_weight",
            Slot::QdB => "qd.proj_bias",
            Slot::HeadW1 => "qd.w1",
            Slot::HeadB1 => "qd.beta1",
            Slot::HeadW2 => "qd.w2",
            Slot::HeadB2 => "qd.beta2",
            Slot::Fc1W => "fuse_fc1.weight",
            Slot::Fc1B => "fuse_fc1.bias",
            Slot::Fc2W => "fuse_fc2.weight",
            Slot::Fc2B => "fuse_fc2.bias",
        }
    }

    /// Rotation angles draw from [−π, π]; everything else is a classical
    /// weight.
    pub fn is_angle(self) -> bool {
        matches!(self, Slot::QmfBias | Slot::QmfTheta)
    }

    pub fn shape(self, c: &ModelConfig) -> Vec<usize> {
        let [c1, c2] = ModelConfig::STEM_CHANNELS;
        let p = c.head_split;
        match self {
            Slot::Conv1W => vec![c1, 1, 3, 3],
            Slot::Conv1B => vec![c1],
            Slot::Conv2W => vec![c2, c1, 3, 3],
            Slot::Conv2B => vec![c2],
            Slot::StemW => vec![c.flattened(), c.d],
            Slot::StemB => vec![c.d],
            Slot::QmfBias | Slot::QmfTheta => vec![c.m, c.layers, 3],
            Slot::RuleW => vec![c.d, c.d, 3],
            Slot::RuleB => vec![c.d],
            Slot::QdW => vec![c.m * c.d, c.qubits],
            Slot::QdB => vec![c.qubits],
            Slot::HeadW1 => vec![p],
            Slot::HeadB1 | Slot::HeadB2 => vec![1],
            Slot::HeadW2 => vec![c.qubits - p],
            Slot::Fc1W => vec![c.d + 1, c.hidden],
            Slot::Fc1B => vec![c.hidden],
            Slot::Fc2W => vec![c.hidden, c.n_classes],
            Slot::Fc2B => vec![c.n_classes],
        }
    }

    /// Fan-in used for the uniform ±1/√fan_in initialisation.
    fn fan_in(self, c: &ModelConfig) -> usize {
        let [c1, _] = ModelConfig::STEM_CHANNELS;
        match self {
            Slot::Conv1W | Slot::Conv1B => 9,
            Slot::Conv2W | Slot::Conv2B => c1 * 9,
            Slot::StemW | Slot::StemB => c.flattened(),
            Slot::RuleW | Slot::RuleB => c.d * 3,
            Slot::QdW | Slot::QdB => c.m * c.d,
            Slot::HeadW1 | Slot::HeadB1 => c.head_split,
            Slot::HeadW2 | Slot::HeadB2 => c.qubits - c.head_split,
            Slot::Fc1W | Slot::Fc1B => c.d + 1,
            Slot::Fc2W | Slot::Fc2B => c.hidden,
            Slot::QmfBias | Slot::QmfTheta => 1,
        }
    }
}

/// All trainable parameters, stored in [`Slot`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    config: ModelConfig,
    tensors: Vec<ParamTensor>,
}

impl ModelParams {
    pub fn zeros(config: ModelConfig) -> Result<Self> {
        config.validate()?;
        let tensors = Slot::ALL.iter().map(|s| ParamTensor::zeros(s.shape(&config))).collect();
        Ok(Self { config, tensors })
    }

    /// Seeded initialisation: angles uniform in [−π, π], classical weights
    /// and biases uniform in ±1/√fan_in. Tensors are drawn in slot order.
    pub fn init(config: ModelConfig, seed: u64) -> Result<Self> {
        let mut params = Self::zeros(config)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for slot in Slot::ALL {
            let bound = if slot.is_angle() { PI } else { 1.0 / (slot.fan_in(&config) as f64).sqrt() };
            for v in &mut params[slot].values {
                *v = rng.gen_range(-bound..=bound);
            }
        }
        Ok(params)
    }

    /// Builds parameters from raw tensor values in slot order.
    pub fn from_values(config: ModelConfig, values: Vec<Vec<f64>>) -> Result<Self> {
        config.validate()?;
        if values.len() != Slot::COUNT {
            return invalid(format!("expected {} tensors, got {}", Slot::COUNT, values.len()));
        }
        let tensors = Slot::ALL
            .iter()
            .zip(values)
            .map(|(s, v)| ParamTensor::new(s.shape(&config), v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { config, tensors })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn tensors(&self) -> &[ParamTensor] {
        &self.tensors
    }

    pub fn tensors_mut(&mut self) -> &mut [ParamTensor] {
        &mut self.tensors
    }

    pub fn count(&self) -> usize {
        self.tensors.iter().map(ParamTensor::len).sum()
    }

    pub fn values(&self, slot: Slot) -> &[f64] {
        &self.tensors[slot as usize].values
    }

    pub fn is_finite(&self) -> bool {
        self.tensors.iter().all(|t| t.values.iter().all(|v| v.is_finite()))
    }

    /// Copies `grads` into the tensors' gradient buffers.
    pub fn set_grads(&mut self, grads: &Gradients) {
        for (t, g) in self.tensors.iter_mut().zip(&grads.slots) {
            t.grad.copy_from_slice(g);
        }
    }
}

impl Index<Slot> for ModelParams {
    type Output = ParamTensor;
    fn index(&self, slot: Slot) -> &ParamTensor {
        &self.tensors[slot as usize]
    }
}

impl IndexMut<Slot> for ModelParams {
    fn index_mut(&mut self, slot: Slot) -> &mut ParamTensor {
        &mut self.tensors[slot as usize]
    }
}

/// Gradient buffers in slot order, shaped like a [`ModelParams`].
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    slots: Vec<Vec<f64>>,
}

impl Gradients {
    pub fn zeros_like(params: &ModelParams) -> Self {
        Self { slots: params.tensors.iter().map(|t| vec![0.0; t.len()]).collect() }
    }

    pub fn slots(&self) -> &[Vec<f64>] {
        &self.slots
    }

    /// Element-wise `self += other`.
    pub fn add_assign(&mut self, other: &Gradients) {
        for (a, b) in self.slots.iter_mut().zip(&other.slots) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    pub fn scale(&mut self, s: f64) {
        self.slots.iter_mut().flatten().for_each(|x| *x *= s);
    }

    pub fn max_abs(&self) -> f64 {
        self.slots.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl Index<Slot> for Gradients {
    type Output = Vec<f64>;
    fn index(&self, slot: Slot) -> &Vec<f64> {
        &self.slots[slot as usize]
    }
}

impl IndexMut<Slot> for Gradients {
    fn index_mut(&mut self, slot: Slot) -> &mut Vec<f64> {
        &mut self.slots[slot as usize]
    }
}
