use num_complex::Complex64;

use super::{PureState, ZERO};
use crate::error::{check_index, invalid, Result};

/// Reduced density matrix of one qubit, `Tr_{others} |ψ⟩⟨ψ|`.
pub fn single_qubit_marginal(state: &PureState, qubit: usize) -> Result<[[Complex64; 2]; 2]> {
    check_index(qubit, state.n_qubits())?;
    let bit = 1usize << qubit;
    let amps = state.amplitudes();
    let mut rho = [[ZERO; 2]; 2];
    for i0 in (0..amps.len()).filter(|i| i & bit == 0) {
        let (a0, a1) = (amps[i0], amps[i0 | bit]);
        rho[0][0] += a0 * a0.conj();
        rho[0][1] += a0 * a1.conj();
        rho[1][0] += a1 * a0.conj();
        rho[1][1] += a1 * a1.conj();
    }
    Ok(rho)
}

/// Meyer–Wallach measure `Q = 2(1 − mean_k Tr ρ_k²)`.
pub fn meyer_wallach(state: &PureState) -> Result<f64> {
    let n = state.n_qubits();
    if n < 2 {
        return invalid("Meyer-Wallach measure needs at least two qubits");
    }
    let mut purity_sum = 0.0;
    for k in 0..n {
        let r = single_qubit_marginal(state, k)?;
        purity_sum += r.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>();
    }
    Ok((2.0 * (1.0 - purity_sum / n as f64)).clamp(0.0, 1.0))
}
