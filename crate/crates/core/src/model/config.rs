use serde::Serialize;

use crate::error::{invalid, Result};

/// Architecture hyperparameters of the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModelConfig {
    /// Feature count produced by the stem and fed to the membership layer.
    pub d: usize,
    /// Membership functions (rules) per feature.
    pub m: usize,
    /// Re-uploading layers in each membership circuit.
    pub layers: usize,
    /// Qubits in the defuzzification register.
    pub qubits: usize,
    /// Size of the first measurement head; the second gets the rest.
    pub head_split: usize,
    pub hidden: usize,
    pub n_classes: usize,
    /// Side length of the square input images. Must be divisible by 4.
    pub image_size: usize,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self { d: 16, m: 3, layers: 4, qubits: 6, head_split: 3, hidden: 64, n_classes: 10, image_size: 28 }
    }
}

impl ModelConfig {
    pub const STEM_CHANNELS: [usize; 2] = [8, 16];

    /// Config with `head_split` set to `⌊qubits/2⌋`.
    pub fn with_qubits(mut self, qubits: usize) -> Self {
        self.qubits = qubits;
        self.head_split = qubits / 2;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.m == 0 || self.layers == 0 {
            return invalid("d, m and layers must all be at least 1");
        }
        if self.qubits < 3 {
            return invalid(format!("the defuzzifier needs at least 3 qubits, got {}", self.qubits));
        }
        if self.qubits > crate::qsim::MAX_QUBITS {
            return invalid(format!("at most {} qubits are supported, got {}", crate::qsim::MAX_QUBITS, self.qubits));
        }
        if self.head_split == 0 || self.head_split >= self.qubits {
            return invalid(format!("head split must lie in [1, {}), got {}", self.qubits, self.head_split));
        }
        if self.hidden == 0 || self.n_classes < 2 {
            return invalid("hidden width must be positive and there must be at least 2 classes");
        }
        if self.image_size == 0 || self.image_size % 4 != 0 {
            return invalid(format!("image size must be a positive multiple of 4, got {}", self.image_size));
        }
        Ok(())
    }

    pub fn pixels(&self) -> usize {
        self.image_size * self.image_size
    }

    /// Length of the flattened stem activation feeding the stem projection.
    pub fn flattened(&self) -> usize {
        let side = self.image_size / 4;
        Self::STEM_CHANNELS[1] * side * side
    }

    /// Full three-qubit clusters in the defuzzification register.
    pub fn clusters(&self) -> usize {
        self.qubits / 3
    }
}
