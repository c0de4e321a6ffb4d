use super::gate::rotation_unchecked;
use super::{check_register, Axis, DensityMatrix, NoiseChannel, PureState};
use crate::error::{check_index, invalid, Result};

/// One instruction of a [`Circuit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Op {
    Rotation { axis: Axis, qubit: usize, angle: f64 },
    Cnot { control: usize, target: usize },
}

/// A straight-line circuit of Pauli rotations and CNOTs acting on
/// `|0…0⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<Op>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        Ok(Self { n_qubits, ops: Vec::new() })
    }

    pub fn with_capacity(n_qubits: usize, capacity: usize) -> Result<Self> {
        check_register(n_qubits)?;
        Ok(Self { n_qubits, ops: Vec::with_capacity(capacity) })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn rotation(&mut self, axis: Axis, qubit: usize, angle: f64) -> Result<&mut Self> {
        check_index(qubit, self.n_qubits)?;
        if !angle.is_finite() {
            return invalid(format!("rotation angle must be finite, got {angle}"));
        }
        self.ops.push(Op::Rotation { axis, qubit, angle });
        Ok(self)
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<&mut Self> {
        check_index(control, self.n_qubits)?;
        check_index(target, self.n_qubits)?;
        if control == target {
            return invalid("CNOT control and target must differ");
        }
        self.ops.push(Op::Cnot { control, target });
        Ok(self)
    }

    pub fn single_qubit_gate_count(&self) -> usize {
        self.ops.iter().filter(|op| matches!(op, Op::Rotation { .. })).count()
    }

    pub fn cnot_count(&self) -> usize {
        self.ops.iter().filter(|op| matches!(op, Op::Cnot { .. })).count()
    }

    /// Final state of the circuit applied to `|0…0⟩`.
    pub fn run(&self) -> PureState {
        self.run_shifted(None)
    }

    /// Like [`Circuit::run`], but the rotation at op index `shift.0` has
    /// `shift.1` added to its angle. Used for parameter-shift evaluations.
    pub fn run_shifted(&self, shift: Option<(usize, f64)>) -> PureState {
        let mut state = PureState::zero(self.n_qubits).expect("register size checked at construction");
        for (i, op) in self.ops.iter().enumerate() {
            match *op {
                Op::Rotation { axis, qubit, angle } => {
                    let angle = match shift {
                        Some((j, delta)) if j == i => angle + delta,
                        _ => angle,
                    };
                    state.apply_one_qubit_unchecked(qubit, &rotation_unchecked(axis, angle));
                }
                Op::Cnot { control, target } => {
                    state.apply_cnot(control, target).expect("indices checked at construction");
                }
            }
        }
        state
    }

    /// Density-matrix evolution with `channel` applied to the target qubit
    /// right after every single-qubit gate. CNOTs are noiseless.
    pub fn run_noisy(&self, channel: &NoiseChannel) -> Result<DensityMatrix> {
        let mut rho = DensityMatrix::from_pure(&PureState::zero(self.n_qubits)?);
        for op in &self.ops {
            match *op {
                Op::Rotation { axis, qubit, angle } => {
                    rho.apply_one_qubit(qubit, &rotation_unchecked(axis, angle))?;
                    rho.apply_channel(qubit, channel)?;
                }
                Op::Cnot { control, target } => rho.apply_cnot(control, target)?,
            }
        }
        Ok(rho)
    }
}
