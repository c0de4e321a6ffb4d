use nalgebra::DMatrix;
use num_complex::Complex64;

use super::DensityMatrix;
use crate::error::{invalid, Result};

fn hermitian_part(dim: usize, entries: &[Complex64]) -> DMatrix<Complex64> {
    let m = DMatrix::from_row_slice(dim, dim, entries);
    (&m + m.adjoint()).scale(0.5)
}

/// Real eigenvalues of a Hermitian matrix given row-major, ascending.
pub fn hermitian_eigenvalues(dim: usize, entries: &[Complex64]) -> Vec<f64> {
    let mut vals: Vec<f64> = hermitian_part(dim, entries).symmetric_eigen().eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Eigenvalues at or below this are treated as zero when taking square
/// roots of density matrices; round-off in a rank-deficient state would
/// otherwise be amplified by the square root.
const EIGEN_FLOOR: f64 = 1e-12;

/// Principal square root of a positive semidefinite Hermitian matrix.
fn psd_sqrt(m: DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = m.symmetric_eigen();
    let roots = eig.eigenvalues.map(|l| Complex64::new(if l > EIGEN_FLOOR { l.sqrt() } else { 0.0 }, 0.0));
    let v = eig.eigenvectors;
    &v * DMatrix::from_diagonal(&roots) * v.adjoint()
}

/// Uhlmann fidelity `F(ρ, σ) = (Tr √(√ρ σ √ρ))²`, clamped to `[0, 1]`.
///
/// Evaluated as the squared trace norm `‖√ρ √σ‖₁²`, i.e. the squared sum
/// of singular values, which equals the trace form exactly.
pub fn state_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return invalid(format!(
            "fidelity between {}-qubit and {}-qubit states",
            rho.n_qubits(),
            sigma.n_qubits()
        ));
    }
    let dim = rho.dim();
    let sqrt_rho = psd_sqrt(hermitian_part(dim, rho.entries()));
    let sqrt_sigma = psd_sqrt(hermitian_part(dim, sigma.entries()));
    let trace_norm: f64 = (sqrt_rho * sqrt_sigma).singular_values().iter().sum();
    Ok((trace_norm * trace_norm).clamp(0.0, 1.0))
}
