use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::{GateMatrix, ONE, ZERO};
use crate::error::{invalid, Error, Result};

/// The four single-qubit noise models used by the robustness study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum ChannelKind {
    #[serde(rename = "AD")]
    AmplitudeDamping,
    #[serde(rename = "DP")]
    Depolarizing,
    #[serde(rename = "BF")]
    BitFlip,
    #[serde(rename = "PF")]
    PhaseFlip,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 4] = [
        ChannelKind::AmplitudeDamping,
        ChannelKind::Depolarizing,
        ChannelKind::BitFlip,
        ChannelKind::PhaseFlip,
    ];

    pub fn code(self) -> &'static str {
        match self {
            ChannelKind::AmplitudeDamping => "AD",
            ChannelKind::Depolarizing => "DP",
            ChannelKind::BitFlip => "BF",
            ChannelKind::PhaseFlip => "PF",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "AD" | "AMPLITUDE-DAMPING" => Ok(ChannelKind::AmplitudeDamping),
            "DP" | "DEPOLARIZING" => Ok(ChannelKind::Depolarizing),
            "BF" | "BIT-FLIP" => Ok(ChannelKind::BitFlip),
            "PF" | "PHASE-FLIP" => Ok(ChannelKind::PhaseFlip),
            _ => invalid(format!("unknown channel {s:?} (expected AD, DP, BF or PF)")),
        }
    }
}

/// A single-qubit channel given by its Kraus operators.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseChannel {
    kind: ChannelKind,
    probability: f64,
    kraus: Vec<GateMatrix>,
}

impl NoiseChannel {
    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn probability(&self) -> f64 {
        self.probability
    }

    pub fn kraus_ops(&self) -> &[GateMatrix] {
        &self.kraus
    }

    /// `‖Σ K_i† K_i − I‖_max`.
    pub fn completeness_error(&self) -> f64 {
        let mut sum = GateMatrix::from_2x2([[ZERO; 2]; 2]);
        for k in &self.kraus {
            sum = sum.add(&k.dagger().matmul(k).expect("2x2")).expect("2x2");
        }
        sum.max_abs_diff(&GateMatrix::identity(2))
    }
}

/// Builds the Kraus set of `kind` at strength `p ∈ [0, 1]`.
pub fn make_channel(kind: ChannelKind, p: f64) -> Result<NoiseChannel> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("noise probability must lie in [0, 1], got {p}"));
    }
    let re = |x: f64| Complex64::new(x, 0.0);
    let kraus = match kind {
        ChannelKind::AmplitudeDamping => vec![
            GateMatrix::from_2x2([[ONE, ZERO], [ZERO, re((1.0 - p).sqrt())]]),
            GateMatrix::from_2x2([[ZERO, re(p.sqrt())], [ZERO, ZERO]]),
        ],
        ChannelKind::Depolarizing => {
            let w = (p / 4.0).sqrt();
            vec![
                GateMatrix::identity(2).scale((1.0 - 0.75 * p).sqrt()),
                GateMatrix::pauli_x().scale(w),
                GateMatrix::pauli_y().scale(w),
                GateMatrix::pauli_z().scale(w),
            ]
        }
        ChannelKind::BitFlip => vec![
            GateMatrix::identity(2).scale((1.0 - p).sqrt()),
            GateMatrix::pauli_x().scale(p.sqrt()),
        ],
        ChannelKind::PhaseFlip => vec![
            GateMatrix::identity(2).scale((1.0 - p).sqrt()),
            GateMatrix::pauli_z().scale(p.sqrt()),
        ],
    };
    Ok(NoiseChannel { kind, probability: p, kraus })
}
