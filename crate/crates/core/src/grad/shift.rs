use std::f64::consts::FRAC_PI_2;

use crate::error::{invalid, Result};

/// Shift used by the two-point parameter-shift rule.
pub const SHIFT: f64 = FRAC_PI_2;

/// Default central-difference step.
pub const FD_STEP: f64 = 1e-5;

/// Exact derivative of `f` at `theta` when `f` is the expectation of a
/// Pauli observable and `theta` enters through a single Pauli rotation:
/// `(f(θ + π/2) − f(θ − π/2)) / 2`.
pub fn param_shift_grad<F: Fn(f64) -> f64>(f: F, theta: f64) -> f64 {
    (f(theta + SHIFT) - f(theta - SHIFT)) / 2.0
}

/// Central difference `(f(θ + h) − f(θ − h)) / 2h`.
pub fn finite_diff_grad<F: Fn(f64) -> f64>(f: F, theta: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return invalid(format!("finite-difference step must be positive, got {h}"));
    }
    Ok((f(theta + h) - f(theta - h)) / (2.0 * h))
}

/// `|a − b| / max(1, |b|)`.
pub fn relative_error(a: f64, reference: f64) -> f64 {
    (a - reference).abs() / reference.abs().max(1.0)
}

/// Outcome of comparing analytic gradients against a numerical reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradCheckReport {
    pub max_rel_err: f64,
    pub num_params: usize,
    pub tolerance: f64,
}

impl GradCheckReport {
    pub fn new(tolerance: f64) -> Self {
        Self { max_rel_err: 0.0, num_params: 0, tolerance }
    }

    pub fn record(&mut self, rel_err: f64) {
        self.num_params += 1;
        self.max_rel_err = self.max_rel_err.max(rel_err);
    }

    pub fn merge(&mut self, other: &GradCheckReport) {
        self.num_params += other.num_params;
        self.max_rel_err = self.max_rel_err.max(other.max_rel_err);
    }

    pub fn passed(&self) -> bool {
        self.max_rel_err < self.tolerance
    }
}
