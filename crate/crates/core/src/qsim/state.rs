use num_complex::Complex64;

use super::{check_register, GateMatrix, ONE, ZERO};
use crate::error::{check_index, invalid, Result};

/// An `n`-qubit pure state held as `2^n` amplitudes.
///
/// Basis index bit `k` is qubit `k`, so qubit 0 is the least significant
/// bit.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl PureState {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[0] = ONE;
        Ok(Self { n_qubits, amps })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_register(n_qubits)?;
        check_index(index, 1 << n_qubits)?;
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[index] = ONE;
        Ok(Self { n_qubits, amps })
    }

    /// Wraps raw amplitudes; they must be finite and normalised to 1e-10.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return invalid(format!("amplitude count {len} is not a power of two >= 2"));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_register(n_qubits)?;
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return invalid("non-finite amplitude");
        }
        let state = Self { n_qubits, amps };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return invalid(format!("state not normalised: sum |a|^2 = {norm}"));
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return invalid("inner product of registers with different sizes");
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Applies a 2×2 gate to `qubit`.
    pub fn apply_one_qubit(&mut self, qubit: usize, gate: &GateMatrix) -> Result<()> {
        check_index(qubit, self.n_qubits)?;
        if gate.dim() != 2 {
            return invalid("one-qubit gate must be 2x2");
        }
        self.apply_one_qubit_unchecked(qubit, gate);
        Ok(())
    }

    #[inline]
    pub(crate) fn apply_one_qubit_unchecked(&mut self, qubit: usize, gate: &GateMatrix) {
        let (g00, g01, g10, g11) = (gate.get(0, 0), gate.get(0, 1), gate.get(1, 0), gate.get(1, 1));
        let stride = 1usize << qubit;
        let len = self.amps.len();
        let mut base = 0;
        while base < len {
            for i0 in base..base + stride {
                let i1 = i0 | stride;
                let a0 = self.amps[i0];
                let a1 = self.amps[i1];
                self.amps[i0] = g00 * a0 + g01 * a1;
                self.amps[i1] = g10 * a0 + g11 * a1;
            }
            base += stride << 1;
        }
    }

    /// Flips `target` on every basis state whose `control` bit is set.
    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        check_index(control, self.n_qubits)?;
        check_index(target, self.n_qubits)?;
        if control == target {
            return invalid("CNOT control and target must differ");
        }
        let (c, t) = (1usize << control, 1usize << target);
        for i in 0..self.amps.len() {
            // visit each swapped pair once, from the member with target bit 0
            if i & c != 0 && i & t == 0 {
                self.amps.swap(i, i | t);
            }
        }
        Ok(())
    }

    /// Applies a 4×4 gate whose first tensor factor is `high` and second
    /// is `low`, i.e. the matrix index is `2·bit(high) + bit(low)`.
    pub fn apply_two_qubit(&mut self, high: usize, low: usize, gate: &GateMatrix) -> Result<()> {
        check_index(high, self.n_qubits)?;
        check_index(low, self.n_qubits)?;
        if high == low {
            return invalid("two-qubit gate needs distinct qubits");
        }
        if gate.dim() != 4 {
            return invalid("two-qubit gate must be 4x4");
        }
        let (h, l) = (1usize << high, 1usize << low);
        for i in 0..self.amps.len() {
            if i & h != 0 || i & l != 0 {
                continue;
            }
            let idx = [i, i | l, i | h, i | h | l];
            let old = idx.map(|j| self.amps[j]);
            for (r, &j) in idx.iter().enumerate() {
                self.amps[j] = (0..4).map(|c| gate.get(r, c) * old[c]).sum();
            }
        }
        Ok(())
    }

    /// `⟨Z_qubit⟩`, computed exactly from the amplitudes.
    pub fn expectation_z(&self, qubit: usize) -> Result<f64> {
        check_index(qubit, self.n_qubits)?;
        Ok(self.expectation_z_unchecked(qubit))
    }

    pub(crate) fn expectation_z_unchecked(&self, qubit: usize) -> f64 {
        let mask = 1usize << qubit;
        let z: f64 = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, a)| if i & mask == 0 { a.norm_sqr() } else { -a.norm_sqr() })
            .sum();
        z.clamp(-1.0, 1.0)
    }
}
