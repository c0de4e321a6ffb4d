//! Two-block convolutional feature extractor followed by a linear
//! projection to `d` features.

use crate::error::{invalid, Result};
use crate::grad::layers::{relu_backward, relu_forward, Conv2d, Linear, MaxPool2};

use super::{Gradients, ModelConfig, ModelParams, Slot};

struct Shapes {
    conv1: Conv2d,
    pool1: MaxPool2,
    conv2: Conv2d,
    pool2: MaxPool2,
    fc: Linear,
}

fn shapes(c: &ModelConfig) -> Shapes {
    let [c1, c2] = ModelConfig::STEM_CHANNELS;
    let s = c.image_size;
    let h = s / 2;
    Shapes {
        conv1: Conv2d { c_in: 1, c_out: c1, height: s, width: s },
        pool1: MaxPool2 { channels: c1, height: s, width: s },
        conv2: Conv2d { c_in: c1, c_out: c2, height: h, width: h },
        pool2: MaxPool2 { channels: c2, height: h, width: h },
        fc: Linear { n_in: c.flattened(), n_out: c.d },
    }
}

/// Activations of one image, kept for the backward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct StemTrace {
    pub image: Vec<f64>,
    pub conv1_pre: Vec<f64>,
    pub conv1_act: Vec<f64>,
    pub pool1: Vec<f64>,
    pub conv2_pre: Vec<f64>,
    pub conv2_act: Vec<f64>,
    pub flat: Vec<f64>,
    pub features: Vec<f64>,
}

pub fn stem_sample(image: &[f64], params: &ModelParams) -> Result<StemTrace> {
    let c = params.config();
    if image.len() != c.pixels() {
        return invalid(format!(
            "expected a {0}×{0} image ({1} pixels), got {2} values",
            c.image_size,
            c.pixels(),
            image.len()
        ));
    }
    let s = shapes(c);
    let conv1_pre = s.conv1.forward(params.values(Slot::Conv1W), params.values(Slot::Conv1B), image)?;
    let conv1_act = relu_forward(&conv1_pre);
    let pool1 = s.pool1.forward(&conv1_act)?;
    let conv2_pre = s.conv2.forward(params.values(Slot::Conv2W), params.values(Slot::Conv2B), &pool1)?;
    let conv2_act = relu_forward(&conv2_pre);
    let flat = s.pool2.forward(&conv2_act)?;
    let features = s.fc.forward(params.values(Slot::StemW), params.values(Slot::StemB), &flat)?;
    Ok(StemTrace { image: image.to_vec(), conv1_pre, conv1_act, pool1, conv2_pre, conv2_act, flat, features })
}

/// Feature vectors `[B][d]` for a batch of images.
pub fn stem_forward(images: &[&[f64]], params: &ModelParams) -> Result<Vec<Vec<f64>>> {
    images.iter().map(|img| stem_sample(img, params).map(|t| t.features)).collect()
}

/// Accumulates the stem parameter gradients of `upstream · features`.
pub fn stem_backward(trace: &StemTrace, params: &ModelParams, upstream: &[f64], grads: &mut Gradients) -> Result<()> {
    let s = shapes(params.config());
    let g = s.fc.backward(params.values(Slot::StemW), &trace.flat, upstream, true)?;
    grads[Slot::StemW] = g.weight;
    grads[Slot::StemB] = g.bias;
    let g_act2 = s.pool2.backward(&trace.conv2_act, &g.input)?;
    let g_pre2 = relu_backward(&trace.conv2_pre, &g_act2)?;
    let g = s.conv2.backward(params.values(Slot::Conv2W), &trace.pool1, &g_pre2, true)?;
    grads[Slot::Conv2W] = g.weight;
    grads[Slot::Conv2B] = g.bias;
    let g_act1 = s.pool1.backward(&trace.conv1_act, &g.input)?;
    let g_pre1 = relu_backward(&trace.conv1_pre, &g_act1)?;
    let g = s.conv1.backward(params.values(Slot::Conv1W), &trace.image, &g_pre1, false)?;
    grads[Slot::Conv1W] = g.weight;
    grads[Slot::Conv1B] = g.bias;
    Ok(())
}
