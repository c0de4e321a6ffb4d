//! Forward and reverse-mode kernels for the classical layers.
//!
//! Every kernel works on one sample held in a flat row-major slice. The
//! forward input doubles as the cache for the backward pass.

use crate::error::{invalid, Result};

/// Gradients produced by one backward call. `input` is empty when the caller
/// did not ask for it; `weight`/`bias` are empty for parameter-free layers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LayerGrads {
    pub input: Vec<f64>,
    pub weight: Vec<f64>,
    pub bias: Vec<f64>,
}

fn check_len(what: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return invalid(format!("{what}: expected length {want}, got {got}"));
    }
    Ok(())
}

/// `y = x·W + b` with `W` stored `[n_in][n_out]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Linear {
    pub n_in: usize,
    pub n_out: usize,
}

impl Linear {
    pub fn forward(&self, w: &[f64], b: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        check_len("linear weight", w.len(), self.n_in * self.n_out)?;
        check_len("linear bias", b.len(), self.n_out)?;
        check_len("linear input", x.len(), self.n_in)?;
        let mut y = b.to_vec();
        for (xi, row) in x.iter().zip(w.chunks_exact(self.n_out)) {
            if *xi == 0.0 {
                continue;
            }
            for (yj, wij) in y.iter_mut().zip(row) {
                *yj += xi * wij;
            }
        }
        Ok(y)
    }

    pub fn backward(&self, w: &[f64], x: &[f64], upstream: &[f64], want_input: bool) -> Result<LayerGrads> {
        check_len("linear weight", w.len(), self.n_in * self.n_out)?;
        check_len("linear input", x.len(), self.n_in)?;
        check_len("linear upstream", upstream.len(), self.n_out)?;
        let mut weight = vec![0.0; w.len()];
        for (xi, grow) in x.iter().zip(weight.chunks_exact_mut(self.n_out)) {
            for (g, u) in grow.iter_mut().zip(upstream) {
                *g = xi * u;
            }
        }
        let input = if want_input {
            w.chunks_exact(self.n_out)
                .map(|row| row.iter().zip(upstream).map(|(a, b)| a * b).sum())
                .collect()
        } else {
            Vec::new()
        };
        Ok(LayerGrads { input, weight, bias: upstream.to_vec() })
    }
}

/// One-dimensional convolution, kernel width 3, zero padding 1, stride 1.
/// Input `[c_in][len]`, output `[c_out][len]`, kernel `[c_in][c_out][3]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Conv1d {
    pub c_in: usize,
    pub c_out: usize,
    pub len: usize,
}

impl Conv1d {
    pub const WIDTH: usize = 3;

    fn kidx(&self, i: usize, o: usize, k: usize) -> usize {
        (i * self.c_out + o) * Self::WIDTH + k
    }

    fn check(&self, w: &[f64], x: &[f64]) -> Result<()> {
        if self.len == 0 {
            return invalid("conv1d needs a non-empty sequence");
        }
        check_len("conv1d kernel", w.len(), self.c_in * self.c_out * Self::WIDTH)?;
        check_len("conv1d input", x.len(), self.c_in * self.len)
    }

    pub fn forward(&self, w: &[f64], b: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        self.check(w, x)?;
        check_len("conv1d bias", b.len(), self.c_out)?;
        let n = self.len as isize;
        let mut y = vec![0.0; self.c_out * self.len];
        for o in 0..self.c_out {
            for p in 0..n {
                let mut acc = b[o];
                for i in 0..self.c_in {
                    for k in 0..Self::WIDTH {
                        let src = p + k as isize - 1;
                        if (0..n).contains(&src) {
                            acc += w[self.kidx(i, o, k)] * x[i * self.len + src as usize];
                        }
                    }
                }
                y[o * self.len + p as usize] = acc;
            }
        }
        Ok(y)
    }

    pub fn backward(&self, w: &[f64], x: &[f64], upstream: &[f64], want_input: bool) -> Result<LayerGrads> {
        self.check(w, x)?;
        check_len("conv1d upstream", upstream.len(), self.c_out * self.len)?;
        let n = self.len as isize;
        let mut weight = vec![0.0; w.len()];
        let mut input = vec![0.0; if want_input { x.len() } else { 0 }];
        let mut bias = vec![0.0; self.c_out];
        for o in 0..self.c_out {
            for p in 0..n {
                let g = upstream[o * self.len + p as usize];
                bias[o] += g;
                for i in 0..self.c_in {
                    for k in 0..Self::WIDTH {
                        let src = p + k as isize - 1;
                        if !(0..n).contains(&src) {
                            continue;
                        }
                        let xi = i * self.len + src as usize;
                        weight[self.kidx(i, o, k)] += g * x[xi];
                        if want_input {
                            input[xi] += g * w[self.kidx(i, o, k)];
                        }
                    }
                }
            }
        }
        Ok(LayerGrads { input, weight, bias })
    }
}

/// 3×3 convolution with zero padding 1. Input `[c_in][h][w]`, output
/// `[c_out][h][w]`, kernel `[c_out][c_in][3][3]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Conv2d {
    pub c_in: usize,
    pub c_out: usize,
    pub height: usize,
    pub width: usize,
}

impl Conv2d {
    fn check(&self, k: &[f64], x: &[f64]) -> Result<()> {
        check_len("conv2d kernel", k.len(), self.c_out * self.c_in * 9)?;
        check_len("conv2d input", x.len(), self.c_in * self.height * self.width)
    }

    pub fn output_len(&self) -> usize {
        self.c_out * self.height * self.width
    }

    pub fn forward(&self, k: &[f64], b: &[f64], x: &[f64]) -> Result<Vec<f64>> {
        self.check(k, x)?;
        check_len("conv2d bias", b.len(), self.c_out)?;
        let (h, w) = (self.height, self.width);
        let plane = h * w;
        let mut y = vec![0.0; self.output_len()];
        for o in 0..self.c_out {
            let out = &mut y[o * plane..(o + 1) * plane];
            out.iter_mut().for_each(|v| *v = b[o]);
            for i in 0..self.c_in {
                let src = &x[i * plane..(i + 1) * plane];
                let kern = &k[(o * self.c_in + i) * 9..(o * self.c_in + i + 1) * 9];
                for (t, &kv) in kern.iter().enumerate() {
                    let (dy, dx) = (t / 3, t % 3);
                    // output row r reads input row r + dy - 1
                    let r_lo = 1usize.saturating_sub(dy);
                    let r_hi = (h + 1 - dy).min(h);
                    let c_lo = 1usize.saturating_sub(dx);
                    let c_hi = (w + 1 - dx).min(w);
                    for r in r_lo..r_hi {
                        let srow = &src[(r + dy - 1) * w..];
                        let orow = &mut out[r * w..(r + 1) * w];
                        for c in c_lo..c_hi {
                            orow[c] += kv * srow[c + dx - 1];
                        }
                    }
                }
            }
        }
        Ok(y)
    }

    pub fn backward(&self, k: &[f64], x: &[f64], upstream: &[f64], want_input: bool) -> Result<LayerGrads> {
        self.check(k, x)?;
        check_len("conv2d upstream", upstream.len(), self.output_len())?;
        let (h, w) = (self.height, self.width);
        let plane = h * w;
        let mut weight = vec![0.0; k.len()];
        let mut input = vec![0.0; if want_input { x.len() } else { 0 }];
        let bias = upstream.chunks_exact(plane).map(|p| p.iter().sum()).collect();
        for o in 0..self.c_out {
            let up = &upstream[o * plane..(o + 1) * plane];
            for i in 0..self.c_in {
                let src = &x[i * plane..(i + 1) * plane];
                let base = (o * self.c_in + i) * 9;
                for t in 0..9 {
                    let (dy, dx) = (t / 3, t % 3);
                    let r_lo = 1usize.saturating_sub(dy);
                    let r_hi = (h + 1 - dy).min(h);
                    let c_lo = 1usize.saturating_sub(dx);
                    let c_hi = (w + 1 - dx).min(w);
                    let kv = k[base + t];
                    let mut acc = 0.0;
                    for r in r_lo..r_hi {
                        let srow = (r + dy - 1) * w;
                        for c in c_lo..c_hi {
                            let g = up[r * w + c];
                            acc += g * src[srow + c + dx - 1];
                            if want_input {
                                input[i * plane + srow + c + dx - 1] += g * kv;
                            }
                        }
                    }
                    weight[base + t] = acc;
                }
            }
        }
        Ok(LayerGrads { input, weight, bias })
    }
}

pub fn relu_forward(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| v.max(0.0)).collect()
}

/// Passes gradient where the forward input was strictly positive.
pub fn relu_backward(x: &[f64], upstream: &[f64]) -> Result<Vec<f64>> {
    check_len("relu upstream", upstream.len(), x.len())?;
    Ok(x.iter().zip(upstream).map(|(&xi, &g)| if xi > 0.0 { g } else { 0.0 }).collect())
}

/// Non-overlapping 2×2 max pooling over `[channels][h][w]` (even `h`, `w`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaxPool2 {
    pub channels: usize,
    pub height: usize,
    pub width: usize,
}

impl MaxPool2 {
    fn check(&self, x: &[f64]) -> Result<()> {
        if self.height % 2 != 0 || self.width % 2 != 0 {
            return invalid("max pooling needs even spatial dimensions");
        }
        check_len("maxpool input", x.len(), self.channels * self.height * self.width)
    }

    /// Index into `x` of the first maximum of each window, in output order.
    fn argmax(&self, x: &[f64]) -> Vec<usize> {
        let (h, w) = (self.height, self.width);
        let mut out = Vec::with_capacity(x.len() / 4);
        for ch in 0..self.channels {
            for r in (0..h).step_by(2) {
                for c in (0..w).step_by(2) {
                    let base = ch * h * w;
                    let cands = [base + r * w + c, base + r * w + c + 1, base + (r + 1) * w + c, base + (r + 1) * w + c + 1];
                    let mut best = cands[0];
                    for &j in &cands[1..] {
                        if x[j] > x[best] {
                            best = j;
                        }
                    }
                    out.push(best);
                }
            }
        }
        out
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check(x)?;
        Ok(self.argmax(x).into_iter().map(|j| x[j]).collect())
    }

    pub fn backward(&self, x: &[f64], upstream: &[f64]) -> Result<Vec<f64>> {
        self.check(x)?;
        check_len("maxpool upstream", upstream.len(), x.len() / 4)?;
        let mut input = vec![0.0; x.len()];
        for (j, g) in self.argmax(x).into_iter().zip(upstream) {
            input[j] += g;
        }
        Ok(input)
    }
}

/// `log Σ exp(z)` with max subtraction.
pub fn log_sum_exp(logits: &[f64]) -> f64 {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    max + logits.iter().map(|z| (z - max).exp()).sum::<f64>().ln()
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let lse = log_sum_exp(logits);
    logits.iter().map(|z| (z - lse).exp()).collect()
}

/// Softmax followed by negative log-likelihood of `label`, for one sample.
pub struct SoftmaxCrossEntropy;

impl SoftmaxCrossEntropy {
    pub fn forward(logits: &[f64], label: usize) -> Result<f64> {
        if label >= logits.len() {
            return invalid(format!("label {label} out of range for {} classes", logits.len()));
        }
        Ok(log_sum_exp(logits) - logits[label])
    }

    /// `softmax(z) − onehot(label)`.
    pub fn backward(logits: &[f64], label: usize) -> Result<Vec<f64>> {
        if label >= logits.len() {
            return invalid(format!("label {label} out of range for {} classes", logits.len()));
        }
        let mut g = softmax(logits);
        g[label] -= 1.0;
        Ok(g)
    }
}
