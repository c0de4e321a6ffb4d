use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::{ONE, ZERO};
use crate::error::{invalid, Error, Result};

/// Rotation axis of a single-qubit Pauli rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        };
        f.write_str(s)
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            other => invalid(format!("unknown axis {other:?}")),
        }
    }
}

/// A dense 2×2 or 4×4 complex matrix, stored row-major on the stack.
///
/// Gate constructors always produce unitaries; Kraus operators reuse the
/// type without that guarantee.
#[derive(Clone, Copy, PartialEq)]
pub struct GateMatrix {
    dim: usize,
    data: [Complex64; 16],
}

impl fmt::Debug for GateMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<Complex64>> = (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c)).collect())
            .collect();
        f.debug_struct("GateMatrix").field("rows", &rows).finish()
    }
}

impl GateMatrix {
    pub fn from_2x2(m: [[Complex64; 2]; 2]) -> Self {
        let mut data = [ZERO; 16];
        data[0] = m[0][0];
        data[1] = m[0][1];
        data[2] = m[1][0];
        data[3] = m[1][1];
        Self { dim: 2, data }
    }

    pub fn from_4x4(m: [[Complex64; 4]; 4]) -> Self {
        let mut data = [ZERO; 16];
        for (r, row) in m.iter().enumerate() {
            data[r * 4..r * 4 + 4].copy_from_slice(row);
        }
        Self { dim: 4, data }
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = [ZERO; 16];
        for i in 0..dim {
            data[i * dim + i] = ONE;
        }
        Self { dim, data }
    }

    pub fn pauli_x() -> Self {
        Self::from_2x2([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn pauli_y() -> Self {
        let i = Complex64::i();
        Self::from_2x2([[ZERO, -i], [i, ZERO]])
    }

    pub fn pauli_z() -> Self {
        Self::from_2x2([[ONE, ZERO], [ZERO, -ONE]])
    }

    /// CNOT with the first (most significant) tensor factor as control.
    pub fn cnot() -> Self {
        let mut m = [[ZERO; 4]; 4];
        m[0][0] = ONE;
        m[1][1] = ONE;
        m[2][3] = ONE;
        m[3][2] = ONE;
        Self::from_4x4(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        for v in out.data.iter_mut() {
            *v *= s;
        }
        out
    }

    pub fn dagger(&self) -> Self {
        let mut out = Self { dim: self.dim, data: [ZERO; 16] };
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.data[c * self.dim + r] = self.get(r, c).conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &GateMatrix) -> Result<GateMatrix> {
        if self.dim != rhs.dim {
            return invalid(format!("matmul of {}x{} and {}x{}", self.dim, self.dim, rhs.dim, rhs.dim));
        }
        let n = self.dim;
        let mut out = Self { dim: n, data: [ZERO; 16] };
        for r in 0..n {
            for c in 0..n {
                out.data[r * n + c] = (0..n).map(|k| self.get(r, k) * rhs.get(k, c)).sum();
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &GateMatrix) -> Result<GateMatrix> {
        if self.dim != rhs.dim {
            return invalid("matrix sum of mismatched dimensions");
        }
        let mut out = *self;
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a += *b;
        }
        Ok(out)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &GateMatrix) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖U†U − I‖_max`.
    pub fn unitarity_error(&self) -> f64 {
        let prod = self.dagger().matmul(self).expect("same dimension");
        prod.max_abs_diff(&GateMatrix::identity(self.dim))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Pauli rotation `R_axis(angle) = exp(-i·angle·σ/2)`.
pub fn rotation_gate(axis: Axis, angle: f64) -> Result<GateMatrix> {
    if !angle.is_finite() {
        return invalid(format!("rotation angle must be finite, got {angle}"));
    }
    Ok(rotation_unchecked(axis, angle))
}

#[inline]
pub(crate) fn rotation_unchecked(axis: Axis, angle: f64) -> GateMatrix {
    let (s, c) = (angle / 2.0).sin_cos();
    let m = match axis {
        Axis::X => [
            [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
            [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
        ],
        Axis::Y => [
            [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
        ],
        Axis::Z => [
            [Complex64::new(c, -s), ZERO],
            [ZERO, Complex64::new(c, s)],
        ],
    };
    GateMatrix::from_2x2(m)
}
