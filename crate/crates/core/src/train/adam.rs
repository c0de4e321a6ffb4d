use crate::error::{invalid, Result};
use crate::model::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self { beta1: 0.9, beta2: 0.999, eps: 1e-8 }
    }
}

/// First and second moments per parameter, in slot order, plus the step
/// counter.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub m: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
    pub t: u64,
}

impl AdamState {
    pub fn new(params: &ModelParams) -> Self {
        let zeros: Vec<Vec<f64>> = params.tensors().iter().map(|t| vec![0.0; t.len()]).collect();
        Self { m: zeros.clone(), v: zeros, t: 0 }
    }
}

/// Bias-corrected Adam update of one block of values. `t` is the step
/// number after incrementing (starts at 1).
pub fn adam_update(values: &mut [f64], grads: &[f64], m: &mut [f64], v: &mut [f64], t: u64, lr: f64, cfg: &AdamConfig) {
    let c1 = 1.0 - cfg.beta1.powi(t as i32);
    let c2 = 1.0 - cfg.beta2.powi(t as i32);
    for (((x, &g), mi), vi) in values.iter_mut().zip(grads).zip(m.iter_mut()).zip(v.iter_mut()) {
        *mi = cfg.beta1 * *mi + (1.0 - cfg.beta1) * g;
        *vi = cfg.beta2 * *vi + (1.0 - cfg.beta2) * g * g;
        let m_hat = *mi / c1;
        let v_hat = *vi / c2;
        *x -= lr * m_hat / (v_hat.sqrt() + cfg.eps);
    }
}

/// One Adam step over every tensor, reading gradients from the tensors'
/// `grad` buffers.
pub fn adam_step(params: &mut ModelParams, state: &mut AdamState, lr: f64, cfg: &AdamConfig) -> Result<()> {
    if state.m.len() != params.tensors().len() {
        return invalid("optimizer state does not match the parameter set");
    }
    state.t += 1;
    for ((tensor, m), v) in params.tensors_mut().iter_mut().zip(&mut state.m).zip(&mut state.v) {
        if m.len() != tensor.len() {
            return invalid("optimizer state does not match the parameter set");
        }
        let grad = std::mem::take(&mut tensor.grad);
        adam_update(&mut tensor.values, &grad, m, v, state.t, lr, cfg);
        tensor.grad = grad;
    }
    Ok(())
}
