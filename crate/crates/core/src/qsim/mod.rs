//! Dense state-vector and density-matrix simulation for up to
//! [`MAX_QUBITS`] qubits.

mod channel;
mod circuit;
mod density;
mod entanglement;
mod fidelity;
mod gate;
mod state;

pub use channel::{make_channel, ChannelKind, NoiseChannel};
pub use circuit::{Circuit, Op};
pub use density::DensityMatrix;
pub use entanglement::{meyer_wallach, single_qubit_marginal};
pub use fidelity::{hermitian_eigenvalues, state_fidelity};
pub use gate::{rotation_gate, Axis, GateMatrix};
pub use state::PureState;

pub use num_complex::Complex64;

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 12;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub(crate) fn check_register(n_qubits: usize) -> crate::Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return crate::error::invalid(format!(
            "register size {n_qubits} outside 1..={MAX_QUBITS}"
        ));
    }
    Ok(())
}
