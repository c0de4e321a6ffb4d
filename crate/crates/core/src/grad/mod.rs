//! Gradients: exact parameter-shift derivatives for rotation angles,
//! reverse-mode kernels for the classical layers, and a central
//! finite-difference reference.

pub mod layers;
mod shift;
mod tensor;

pub use shift::{finite_diff_grad, param_shift_grad, relative_error, GradCheckReport, FD_STEP, SHIFT};
pub use tensor::ParamTensor;
