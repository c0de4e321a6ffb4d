use num_complex::Complex64;

use super::{check_register, hermitian_eigenvalues, GateMatrix, NoiseChannel, PureState, ZERO};
use crate::error::{check_index, invalid, Result};

/// An `n`-qubit density operator stored as a dense row-major
/// `2^n × 2^n` matrix, with the same qubit ordering as [`PureState`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(state: &PureState) -> Self {
        let amps = state.amplitudes();
        let dim = amps.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for a in amps {
            for b in amps {
                entries.push(a * b.conj());
            }
        }
        Self { n_qubits: state.n_qubits(), dim, entries }
    }

    /// Builds a density matrix from raw row-major entries and checks that it
    /// is Hermitian, unit-trace and positive semidefinite.
    pub fn from_entries(n_qubits: usize, entries: Vec<Complex64>) -> Result<Self> {
        check_register(n_qubits)?;
        let dim = 1usize << n_qubits;
        if entries.len() != dim * dim {
            return invalid(format!("expected {} entries, got {}", dim * dim, entries.len()));
        }
        let rho = Self { n_qubits, dim, entries };
        rho.validate(1e-10)?;
        Ok(rho)
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        let dim = 1usize << n_qubits;
        let mut entries = vec![ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Ok(Self { n_qubits, dim, entries })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// `max |ρ_ij − conj(ρ_ji)|`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.dim {
            for c in r..self.dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(self.dim, &self.entries)
    }

    /// Checks Hermiticity and unit trace to `tol`, and eigenvalues ≥ −1e-9.
    pub fn validate(&self, tol: f64) -> Result<()> {
        if self.entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return invalid("density matrix has non-finite entries");
        }
        let herm = self.hermiticity_error();
        if herm > tol {
            return invalid(format!("density matrix not Hermitian (error {herm:e})"));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return invalid(format!("density matrix trace is {tr}"));
        }
        let min = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -1e-9 {
            return invalid(format!("density matrix has negative eigenvalue {min:e}"));
        }
        Ok(())
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ_ij ρ_ij ρ_ji = Σ_ij |ρ_ij|² for Hermitian ρ
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation_in(&self, state: &PureState) -> Result<f64> {
        if state.n_qubits() != self.n_qubits {
            return invalid("state and density matrix have different register sizes");
        }
        let a = state.amplitudes();
        let mut acc = ZERO;
        for r in 0..self.dim {
            let row: Complex64 = (0..self.dim).map(|c| self.get(r, c) * a[c]).sum();
            acc += a[r].conj() * row;
        }
        Ok(acc.re)
    }

    pub fn expectation_z(&self, qubit: usize) -> Result<f64> {
        check_index(qubit, self.n_qubits)?;
        let mask = 1usize << qubit;
        Ok((0..self.dim)
            .map(|i| {
                let p = self.get(i, i).re;
                if i & mask == 0 {
                    p
                } else {
                    -p
                }
            })
            .sum())
    }

    /// `ρ ← U ρ U†` for a single-qubit `U`.
    pub fn apply_one_qubit(&mut self, qubit: usize, gate: &GateMatrix) -> Result<()> {
        check_index(qubit, self.n_qubits)?;
        if gate.dim() != 2 {
            return invalid("one-qubit gate must be 2x2");
        }
        self.conjugate_in_place(qubit, gate);
        Ok(())
    }

    /// `ρ ← Σ_i K_i ρ K_i†` with the channel's Kraus operators lifted to
    /// `qubit`.
    pub fn apply_channel(&mut self, qubit: usize, channel: &NoiseChannel) -> Result<()> {
        check_index(qubit, self.n_qubits)?;
        let mut acc = vec![ZERO; self.entries.len()];
        for k in channel.kraus_ops() {
            let mut term = self.clone();
            term.conjugate_in_place(qubit, k);
            for (a, t) in acc.iter_mut().zip(term.entries) {
                *a += t;
            }
        }
        self.entries = acc;
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        check_index(control, self.n_qubits)?;
        check_index(target, self.n_qubits)?;
        if control == target {
            return invalid("CNOT control and target must differ");
        }
        let (c, t) = (1usize << control, 1usize << target);
        let perm = |i: usize| if i & c != 0 { i ^ t } else { i };
        let old = self.entries.clone();
        for r in 0..self.dim {
            for col in 0..self.dim {
                self.entries[r * self.dim + col] = old[perm(r) * self.dim + perm(col)];
            }
        }
        Ok(())
    }

    /// `ρ ← K ρ K†` on one qubit; `K` need not be unitary.
    fn conjugate_in_place(&mut self, qubit: usize, k: &GateMatrix) {
        let (k00, k01, k10, k11) = (k.get(0, 0), k.get(0, 1), k.get(1, 0), k.get(1, 1));
        let bit = 1usize << qubit;
        let dim = self.dim;
        // rows: ρ ← K ρ
        for r0 in (0..dim).filter(|r| r & bit == 0) {
            let r1 = r0 | bit;
            for c in 0..dim {
                let a = self.entries[r0 * dim + c];
                let b = self.entries[r1 * dim + c];
                self.entries[r0 * dim + c] = k00 * a + k01 * b;
                self.entries[r1 * dim + c] = k10 * a + k11 * b;
            }
        }
        // columns: ρ ← ρ K†, (K†)_{ij} = conj(K_ji)
        let (d00, d01, d10, d11) = (k00.conj(), k10.conj(), k01.conj(), k11.conj());
        for r in 0..dim {
            for c0 in (0..dim).filter(|c| c & bit == 0) {
                let c1 = c0 | bit;
                let a = self.entries[r * dim + c0];
                let b = self.entries[r * dim + c1];
                self.entries[r * dim + c0] = a * d00 + b * d10;
                self.entries[r * dim + c1] = a * d01 + b * d11;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::{make_channel, rotation_gate, Axis, ChannelKind};
    use std::f64::consts::FRAC_PI_2;

    fn plus() -> PureState {
        let mut s = PureState::zero(1).unwrap();
        s.apply_one_qubit(0, &rotation_gate(Axis::Y, FRAC_PI_2).unwrap()).unwrap();
        s
    }

    #[test]
    fn pure_zero_is_projector() {
        let rho = DensityMatrix::from_pure(&PureState::zero(1).unwrap());
        assert_eq!(rho.get(0, 0), Complex64::new(1.0, 0.0));
        assert_eq!(rho.get(1, 1), ZERO);
        assert_eq!(rho.get(0, 1), ZERO);
    }

    #[test]
    fn plus_state_all_halves() {
        let rho = DensityMatrix::from_pure(&plus());
        for z in rho.entries() {
            assert!((z - Complex64::new(0.5, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn bell_state_corners() {
        let mut s = PureState::zero(2).unwrap();
        s.apply_one_qubit(1, &rotation_gate(Axis::Y, FRAC_PI_2).unwrap()).unwrap();
        s.apply_cnot(1, 0).unwrap();
        let rho = DensityMatrix::from_pure(&s);
        for r in 0..4 {
            for c in 0..4 {
                let corner = (r == 0 || r == 3) && (c == 0 || c == 3);
                let want = if corner { 0.5 } else { 0.0 };
                assert!((rho.get(r, c).re - want).abs() < 1e-12, "({r},{c})");
            }
        }
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        rho.validate(1e-10).unwrap();
    }

    #[test]
    fn unitary_evolution_matches_state_vector() {
        let mut s = PureState::zero(2).unwrap();
        let mut rho = DensityMatrix::from_pure(&s);
        let g = rotation_gate(Axis::X, 0.83).unwrap();
        s.apply_one_qubit(1, &g).unwrap();
        rho.apply_one_qubit(1, &g).unwrap();
        s.apply_cnot(1, 0).unwrap();
        rho.apply_cnot(1, 0).unwrap();
        let direct = DensityMatrix::from_pure(&s);
        for (a, b) in rho.entries().iter().zip(direct.entries()) {
            assert!((a - b).norm() < 1e-14);
        }
        assert!((rho.expectation_z(0).unwrap() - s.expectation_z(0).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn amplitude_damping_fixes_ground_state() {
        let mut rho = DensityMatrix::from_pure(&PureState::zero(1).unwrap());
        let before = rho.clone();
        rho.apply_channel(0, &make_channel(ChannelKind::AmplitudeDamping, 0.3).unwrap()).unwrap();
        assert_eq!(rho, before);
    }

    /// Brute-force Kraus sum `Σ K ρ K†` on a single qubit via 2×2 matrix
    /// products.
    fn kraus_sum_oracle(rho: [[Complex64; 2]; 2], ops: &[GateMatrix]) -> [[Complex64; 2]; 2] {
        let mut out = [[ZERO; 2]; 2];
        for k in ops {
            for i in 0..2 {
                for j in 0..2 {
                    for a in 0..2 {
                        for b in 0..2 {
                            out[i][j] += k.get(i, a) * rho[a][b] * k.get(j, b).conj();
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn bit_flip_on_ground_state() {
        let ch = make_channel(ChannelKind::BitFlip, 0.1).unwrap();
        let mut rho = DensityMatrix::from_pure(&PureState::zero(1).unwrap());
        rho.apply_channel(0, &ch).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let oracle = kraus_sum_oracle([[one, ZERO], [ZERO, ZERO]], ch.kraus_ops());
        assert!((oracle[0][0].re - 0.9).abs() < 1e-15 && (oracle[1][1].re - 0.1).abs() < 1e-15);
        assert!((rho.get(0, 0).re - 0.9).abs() < 1e-12);
        assert!((rho.get(1, 1).re - 0.1).abs() < 1e-12);
        assert!(rho.get(0, 1).norm() < 1e-12);
    }

    #[test]
    fn depolarizing_mixes_toward_identity() {
        let p = 0.37;
        let mut s = PureState::zero(1).unwrap();
        s.apply_one_qubit(0, &rotation_gate(Axis::X, 1.1).unwrap()).unwrap();
        s.apply_one_qubit(0, &rotation_gate(Axis::Z, -0.4).unwrap()).unwrap();
        let rho0 = DensityMatrix::from_pure(&s);
        let ch = make_channel(ChannelKind::Depolarizing, p).unwrap();
        let mut rho = rho0.clone();
        rho.apply_channel(0, &ch).unwrap();

        let m = [[rho0.get(0, 0), rho0.get(0, 1)], [rho0.get(1, 0), rho0.get(1, 1)]];
        let oracle = kraus_sum_oracle(m, ch.kraus_ops());
        for i in 0..2 {
            for j in 0..2 {
                let delta = if i == j { p / 2.0 } else { 0.0 };
                let want = rho0.get(i, j) * (1.0 - p) + Complex64::new(delta, 0.0);
                assert!((rho.get(i, j) - want).norm() < 1e-12);
                assert!((oracle[i][j] - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn channel_on_second_qubit_preserves_trace_and_hermiticity() {
        let mut s = PureState::zero(3).unwrap();
        for q in 0..3 {
            s.apply_one_qubit(q, &rotation_gate(Axis::Y, 0.3 + q as f64).unwrap()).unwrap();
        }
        s.apply_cnot(0, 2).unwrap();
        let mut rho = DensityMatrix::from_pure(&s);
        for kind in ChannelKind::ALL {
            rho.apply_channel(1, &make_channel(kind, 0.2).unwrap()).unwrap();
        }
        rho.validate(1e-10).unwrap();
        assert!(rho.apply_channel(3, &make_channel(ChannelKind::BitFlip, 0.1).unwrap()).is_err());
    }

    #[test]
    fn from_entries_rejects_invalid() {
        let one = Complex64::new(1.0, 0.0);
        assert!(DensityMatrix::from_entries(1, vec![one, ZERO, ZERO, one]).is_err());
        assert!(DensityMatrix::from_entries(1, vec![one, ZERO, ZERO]).is_err());
        let neg = vec![Complex64::new(1.5, 0.0), ZERO, ZERO, Complex64::new(-0.5, 0.0)];
        assert!(DensityMatrix::from_entries(1, neg).is_err());
        assert!(DensityMatrix::maximally_mixed(2).unwrap().validate(1e-12).is_ok());
    }
}
