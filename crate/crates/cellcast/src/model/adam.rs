//! Adam optimizer with bias correction.

use ndarray::Array2;

use super::{DenseMlpModel, Gradients};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamParams {
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamParams {
    fn default() -> Self {
        AdamParams {
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// First and second moment estimates for every weight matrix, plus the step
/// counter driving bias correction.
#[derive(Debug, Clone)]
pub struct AdamState {
    step: u64,
    m: Vec<Array2<f64>>,
    v: Vec<Array2<f64>>,
}

impl AdamState {
    pub fn new(model: &DenseMlpModel) -> Self {
        let zeros: Vec<Array2<f64>> = model
            .matrices()
            .iter()
            .map(|w| Array2::zeros(w.dim()))
            .collect();
        AdamState {
            step: 0,
            m: zeros.clone(),
            v: zeros,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }
}

/// One Adam update of every weight matrix:
///
/// ```text
/// m <- b1 m + (1-b1) g        v <- b2 v + (1-b2) g^2
/// w <- w - lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
/// ```
pub fn adam_step(
    model: &mut DenseMlpModel,
    grads: &Gradients,
    state: &mut AdamState,
    lr: f64,
    params: &AdamParams,
) {
    state.step += 1;
    let t = state.step as i32;
    let bc1 = 1.0 - params.beta1.powi(t);
    let bc2 = 1.0 - params.beta2.powi(t);

    let weights = model.matrices_mut();
    let grad_mats = grads.matrices();
    for (((w, g), m), v) in weights
        .into_iter()
        .zip(grad_mats)
        .zip(&mut state.m)
        .zip(&mut state.v)
    {
        assert_eq!(w.dim(), g.dim(), "gradient shape mismatch");
        let w = w.as_slice_mut().expect("standard layout");
        let g = g.as_slice().expect("standard layout");
        let m = m.as_slice_mut().expect("standard layout");
        let v = v.as_slice_mut().expect("standard layout");
        for i in 0..w.len() {
            m[i] = params.beta1 * m[i] + (1.0 - params.beta1) * g[i];
            v[i] = params.beta2 * v[i] + (1.0 - params.beta2) * g[i] * g[i];
            let m_hat = m[i] / bc1;
            let v_hat = v[i] / bc2;
            w[i] -= lr * m_hat / (v_hat.sqrt() + params.epsilon);
        }
    }
}
