use serde::Serialize;

use crate::error::Result;
use crate::model::{qd_circuit, qmf_circuit, ModelConfig, ModelParams, QmfParams, Slot};
use crate::qsim::Op;

/// Resource counts, obtained by instantiating the circuits and parameter
/// tensors and counting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GateCountReport {
    pub config: ModelConfig,
    /// Single-qubit gates over all `m·d` membership circuits of one sample.
    pub qmf_single_qubit_gates: usize,
    pub qd_rx_gates: usize,
    pub qd_cluster_cnots: usize,
    pub qd_wrap_cnots: usize,
    /// Rule convolution kernel weights.
    pub rule_weights: usize,
    /// Defuzzifier projection weights.
    pub qd_projection_weights: usize,
    /// Classifier weights (two linear layers, biases excluded).
    pub classifier_weights: usize,
    pub total_parameters: usize,
}

pub fn gate_count_report(config: &ModelConfig) -> Result<GateCountReport> {
    config.validate()?;
    let params = ModelParams::zeros(*config)?;
    let qmf = QmfParams::from_model(&params);
    let mut qmf_gates = 0;
    for rule in 0..config.m {
        for _feature in 0..config.d {
            qmf_gates += qmf_circuit(0.0, rule, &qmf)?.single_qubit_gate_count();
        }
    }
    let qd = qd_circuit(&vec![0.0; config.qubits])?;
    // a CNOT inside a cluster that already holds three is the wrap-around
    let mut per_cluster = vec![0usize; config.qubits.div_ceil(3)];
    let (mut cluster, mut wrap) = (0, 0);
    for op in qd.ops() {
        if let Op::Cnot { control, target } = *op {
            let j = control / 3;
            if j == target / 3 && per_cluster[j] < 3 {
                per_cluster[j] += 1;
                cluster += 1;
            } else {
                wrap += 1;
            }
        }
    }
    Ok(GateCountReport {
        config: *config,
        qmf_single_qubit_gates: qmf_gates,
        qd_rx_gates: qd.single_qubit_gate_count(),
        qd_cluster_cnots: cluster,
        qd_wrap_cnots: wrap,
        rule_weights: params[Slot::RuleW].len(),
        qd_projection_weights: params[Slot::QdW].len(),
        classifier_weights: params[Slot::Fc1W].len() + params[Slot::Fc2W].len(),
        total_parameters: params.count(),
    })
}
