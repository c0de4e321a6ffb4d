//! Rule layer: a width-3 convolution across the membership axis with the
//! features as channels, followed by ReLU.

use crate::error::{invalid, Result};
use crate::grad::layers::{relu_backward, relu_forward, Conv1d};

use super::{MembershipTensor, ModelParams, Slot};

/// Borrowed view of the rule convolution: kernel `[d][d][3]` (in, out,
/// tap) and bias `[d]`.
#[derive(Debug, Clone, Copy)]
pub struct RuleParams<'a> {
    d: usize,
    kernel: &'a [f64],
    bias: &'a [f64],
}

impl<'a> RuleParams<'a> {
    pub fn new(d: usize, kernel: &'a [f64], bias: &'a [f64]) -> Result<Self> {
        if kernel.len() != d * d * 3 || bias.len() != d {
            return invalid(format!(
                "rule layer with d = {d} needs {} kernel and {d} bias values, got {} and {}",
                d * d * 3,
                kernel.len(),
                bias.len()
            ));
        }
        Ok(Self { d, kernel, bias })
    }

    pub fn from_model(params: &'a ModelParams) -> Self {
        Self { d: params.config().d, kernel: params.values(Slot::RuleW), bias: params.values(Slot::RuleB) }
    }
}

/// Intermediate values of one sample, kept for the backward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleTrace {
    pub m: usize,
    /// Memberships permuted to `[d][m]`.
    pub permuted: Vec<f64>,
    /// Convolution output before ReLU, `[d][m]`.
    pub pre: Vec<f64>,
    /// Activations permuted back to `[m][d]`.
    pub out: Vec<f64>,
}

/// `[rows][cols]` → `[cols][rows]`.
fn transpose(x: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut y = vec![0.0; x.len()];
    for r in 0..rows {
        for c in 0..cols {
            y[c * rows + r] = x[r * cols + c];
        }
    }
    y
}

fn conv(params: &RuleParams, m: usize) -> Conv1d {
    Conv1d { c_in: params.d, c_out: params.d, len: m }
}

/// Convolution output before the ReLU, in `[d][m]` layout.
pub fn rule_preactivation(mu: &[f64], m: usize, params: &RuleParams) -> Result<Vec<f64>> {
    if m == 0 {
        return invalid("rule layer needs at least one membership function");
    }
    if mu.len() != m * params.d {
        return invalid(format!("rule layer expected {} memberships, got {}", m * params.d, mu.len()));
    }
    conv(params, m).forward(params.kernel, params.bias, &transpose(mu, m, params.d))
}

pub fn rule_sample(mu: &[f64], m: usize, params: &RuleParams) -> Result<RuleTrace> {
    let pre = rule_preactivation(mu, m, params)?;
    let out = transpose(&relu_forward(&pre), params.d, m);
    Ok(RuleTrace { m, permuted: transpose(mu, m, params.d), pre, out })
}

/// Rule activations for a batch, flattened `[B][m][d]`.
pub fn rule_forward(h: &MembershipTensor, params: &RuleParams) -> Result<Vec<f64>> {
    if h.d != params.d {
        return invalid(format!("membership tensor has d = {}, rule layer expects {}", h.d, params.d));
    }
    let mut out = Vec::with_capacity(h.values.len());
    for b in 0..h.batch {
        out.extend(rule_sample(h.sample(b), h.m, params)?.out);
    }
    Ok(out)
}

pub struct RuleGrads {
    /// Gradient with respect to the memberships, `[m][d]`.
    pub mu: Vec<f64>,
    pub kernel: Vec<f64>,
    pub bias: Vec<f64>,
}

pub fn rule_backward(trace: &RuleTrace, params: &RuleParams, upstream: &[f64]) -> Result<RuleGrads> {
    let (m, d) = (trace.m, params.d);
    if upstream.len() != m * d {
        return invalid(format!("rule upstream gradient needs {} values, got {}", m * d, upstream.len()));
    }
    let g_pre = relu_backward(&trace.pre, &transpose(upstream, m, d))?;
    let g = conv(params, m).backward(params.kernel, &trace.permuted, &g_pre, true)?;
    Ok(RuleGrads { mu: transpose(&g.input, d, m), kernel: g.weight, bias: g.bias })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Direct convolution over the membership axis, no permutation tricks.
    fn oracle(mu: &[f64], m: usize, d: usize, kernel: &[f64], bias: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; m * d];
        for p in 0..m {
            for c in 0..d {
                let mut acc = bias[c];
                for j in 0..d {
                    for t in 0..3 {
                        let src = p as isize + t as isize - 1;
                        if src >= 0 && (src as usize) < m {
                            acc += kernel[(j * d + c) * 3 + t] * mu[src as usize * d + j];
                        }
                    }
                }
                out[p * d + c] = acc.max(0.0);
            }
        }
        out
    }

    #[test]
    fn zero_parameters_give_zero_output() {
        let (k, b) = (vec![0.0; 4 * 4 * 3], vec![0.0; 4]);
        let p = RuleParams::new(4, &k, &b).unwrap();
        let h = MembershipTensor { batch: 2, m: 3, d: 4, values: vec![0.7; 24] };
        assert!(rule_forward(&h, &p).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn matches_nested_loop_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (m, d) = (3, 4);
        let k: Vec<f64> = (0..d * d * 3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let b: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let p = RuleParams::new(d, &k, &b).unwrap();
        let values: Vec<f64> = (0..2 * m * d).map(|_| rng.gen_range(0.0..1.0)).collect();
        let h = MembershipTensor { batch: 2, m, d, values };
        let out = rule_forward(&h, &p).unwrap();
        for s in 0..2 {
            let want = oracle(h.sample(s), m, d, &k, &b);
            for (x, y) in out[s * m * d..(s + 1) * m * d].iter().zip(&want) {
                assert!((x - y).abs() < 1e-12);
            }
        }
        assert!(out.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn summing_kernel_reproduces_log_product() {
        // centre tap 1 from every input channel to every output channel
        let (m, d) = (1, 5);
        let mut k = vec![0.0; d * d * 3];
        for j in 0..d {
            for c in 0..d {
                k[(j * d + c) * 3 + 1] = 1.0;
            }
        }
        let b = vec![0.0; d];
        let p = RuleParams::new(d, &k, &b).unwrap();
        let mu = [0.9, 0.4, 0.75, 0.2, 0.66];
        let logs: Vec<f64> = mu.iter().map(|v: &f64| v.ln()).collect();
        let want: f64 = mu.iter().product::<f64>().ln();
        for v in rule_preactivation(&logs, m, &p).unwrap() {
            assert!((v - want).abs() < 1e-9);
        }
        // negated kernel: after ReLU the output is −log Π μ
        let neg: Vec<f64> = k.iter().map(|v| -v).collect();
        let p = RuleParams::new(d, &neg, &b).unwrap();
        for v in rule_sample(&logs, m, &p).unwrap().out {
            assert!((v + want).abs() < 1e-9);
        }
    }

    #[test]
    fn layout_round_trips_and_errors() {
        let x: Vec<f64> = (0..6).map(f64::from).collect();
        assert_eq!(transpose(&transpose(&x, 2, 3), 3, 2), x);
        let (k, b) = (vec![0.0; 12], vec![0.0; 2]);
        let p = RuleParams::new(2, &k, &b).unwrap();
        assert!(rule_preactivation(&[], 0, &p).is_err());
        assert!(rule_preactivation(&[0.0; 5], 3, &p).is_err());
        assert!(RuleParams::new(2, &k[..11], &b).is_err());
    }
}
