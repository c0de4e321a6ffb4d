//! The full forward pass and its per-sample backward pass.

use crate::error::{invalid, Result};
use crate::grad::layers::{relu_backward, relu_forward, Linear, SoftmaxCrossEntropy};
use crate::par::try_map_indexed;

use super::qd::{qd_backward, qd_sample, QdParams, QdTrace};
use super::qmf::{qmf_gradient, qmf_sample, QmfParams};
use super::rule::{rule_backward, rule_sample, RuleParams, RuleTrace};
use super::stem::{stem_backward, stem_sample, StemTrace};
use super::{Gradients, ModelConfig, ModelParams, Slot};

/// Samples per gradient chunk. Chunks are summed internally in sample order
/// and then combined in chunk order, so the reduction does not depend on
/// the number of worker threads.
const GRAD_CHUNK: usize = 16;

/// Every intermediate value of one forward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleTrace {
    pub stem: StemTrace,
    /// Memberships `[m][d]`.
    pub memberships: Vec<f64>,
    pub rule: RuleTrace,
    pub qd: QdTrace,
    /// `concat(v, ŷ)`.
    pub fused: Vec<f64>,
    pub hidden_pre: Vec<f64>,
    pub hidden: Vec<f64>,
    pub logits: Vec<f64>,
}

fn fc1(c: &ModelConfig) -> Linear {
    Linear { n_in: c.d + 1, n_out: c.hidden }
}

fn fc2(c: &ModelConfig) -> Linear {
    Linear { n_in: c.hidden, n_out: c.n_classes }
}

pub fn forward_sample(image: &[f64], params: &ModelParams) -> Result<SampleTrace> {
    let c = params.config();
    let stem = stem_sample(image, params)?;
    let memberships = qmf_sample(&stem.features, &QmfParams::from_model(params))?;
    let rule = rule_sample(&memberships, c.m, &RuleParams::from_model(params))?;
    let qd = qd_sample(&rule.out, &QdParams::from_model(params))?;
    let mut fused = stem.features.clone();
    fused.push(qd.output);
    let hidden_pre = fc1(c).forward(params.values(Slot::Fc1W), params.values(Slot::Fc1B), &fused)?;
    let hidden = relu_forward(&hidden_pre);
    let logits = fc2(c).forward(params.values(Slot::Fc2W), params.values(Slot::Fc2B), &hidden)?;
    Ok(SampleTrace { stem, memberships, rule, qd, fused, hidden_pre, hidden, logits })
}

/// Logits `[B][n_classes]`.
pub fn model_forward(images: &[&[f64]], params: &ModelParams) -> Result<Vec<Vec<f64>>> {
    try_map_indexed(images.len(), |b| forward_sample(images[b], params).map(|t| t.logits))
}

/// Gradients of `Σⱼ upstream[j] · logits[j]` with respect to every
/// parameter. Quantum parameters use the shift rule; everything else is
/// reverse mode.
pub fn backward_sample(trace: &SampleTrace, params: &ModelParams, upstream: &[f64]) -> Result<Gradients> {
    let c = params.config();
    let mut grads = Gradients::zeros_like(params);

    let g = fc2(c).backward(params.values(Slot::Fc2W), &trace.hidden, upstream, true)?;
    grads[Slot::Fc2W] = g.weight;
    grads[Slot::Fc2B] = g.bias;
    let g_hidden = relu_backward(&trace.hidden_pre, &g.input)?;
    let g = fc1(c).backward(params.values(Slot::Fc1W), &trace.fused, &g_hidden, true)?;
    grads[Slot::Fc1W] = g.weight;
    grads[Slot::Fc1B] = g.bias;
    let mut g_features = g.input[..c.d].to_vec();
    let g_crisp = g.input[c.d];

    let qd = QdParams::from_model(params);
    let g = qd_backward(&trace.qd, &qd, g_crisp)?;
    grads[Slot::QdW] = g.proj_weight;
    grads[Slot::QdB] = g.proj_bias;
    grads[Slot::HeadW1] = g.w1;
    grads[Slot::HeadB1] = vec![g.beta1];
    grads[Slot::HeadW2] = g.w2;
    grads[Slot::HeadB2] = vec![g.beta2];

    let g = rule_backward(&trace.rule, &RuleParams::from_model(params), &g.input)?;
    grads[Slot::RuleW] = g.kernel;
    grads[Slot::RuleB] = g.bias;

    let qmf = QmfParams::from_model(params);
    let per_rule = c.layers * 3;
    for i in 0..c.m {
        for k in 0..c.d {
            let up = g.mu[i * c.d + k];
            if up == 0.0 {
                continue;
            }
            let q = qmf_gradient(trace.stem.features[k], i, &qmf)?;
            let range = i * per_rule..(i + 1) * per_rule;
            for (acc, d) in grads[Slot::QmfBias][range.clone()].iter_mut().zip(&q.d_bias) {
                *acc += up * d;
            }
            for (acc, d) in grads[Slot::QmfTheta][range].iter_mut().zip(&q.d_theta) {
                *acc += up * d;
            }
            g_features[k] += up * q.d_x;
        }
    }

    stem_backward(&trace.stem, params, &g_features, &mut grads)?;
    Ok(grads)
}

/// Cross-entropy of one sample and its gradient.
pub fn sample_loss_and_grad(image: &[f64], label: usize, params: &ModelParams) -> Result<(f64, Gradients)> {
    let trace = forward_sample(image, params)?;
    let loss = SoftmaxCrossEntropy::forward(&trace.logits, label)?;
    let upstream = SoftmaxCrossEntropy::backward(&trace.logits, label)?;
    Ok((loss, backward_sample(&trace, params, &upstream)?))
}

/// Mean cross-entropy over a batch and the gradient of that mean.
pub fn batch_loss_and_grad(images: &[&[f64]], labels: &[usize], params: &ModelParams) -> Result<(f64, Gradients)> {
    if images.is_empty() || images.len() != labels.len() {
        return invalid(format!("batch needs matching non-empty images and labels, got {} and {}", images.len(), labels.len()));
    }
    let n_chunks = images.len().div_ceil(GRAD_CHUNK);
    let partials = try_map_indexed(n_chunks, |ch| {
        let lo = ch * GRAD_CHUNK;
        let hi = (lo + GRAD_CHUNK).min(images.len());
        let mut loss = 0.0;
        let mut acc = Gradients::zeros_like(params);
        for b in lo..hi {
            let (l, g) = sample_loss_and_grad(images[b], labels[b], params)?;
            loss += l;
            acc.add_assign(&g);
        }
        Ok((loss, acc))
    })?;
    let mut loss = 0.0;
    let mut total = Gradients::zeros_like(params);
    for (l, g) in &partials {
        loss += l;
        total.add_assign(g);
    }
    let scale = 1.0 / images.len() as f64;
    total.scale(scale);
    Ok((loss * scale, total))
}

/// Predicted class (first maximum) of each logit row.
pub fn predict(logits: &[Vec<f64>]) -> Vec<usize> {
    logits
        .iter()
        .map(|row| {
            let mut best = 0;
            for (j, v) in row.iter().enumerate() {
                if *v > row[best] {
                    best = j;
                }
            }
            best
        })
        .collect()
}
