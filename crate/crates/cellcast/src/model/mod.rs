//! The densely connected MLP regressor and its training machinery.
//!
//! The network is bias-free and wires every earlier layer into every later
//! one. With input row vector `x`:
//!
//! ```text
//! h1 = relu(x W1)
//! h2 = relu(x W2 + h1 W3) / 2
//! out = relu((x W4 + h1 W5 + h2 W6) / 3)
//! ```
//!
//! The divisors average the contributions entering each stage, and the final
//! relu pins forecasts to the non-negative range of the indicators. Training
//! minimizes the squared mean combined error (see [`loss`]) with Adam under
//! a linearly decaying learning rate; gradients are exact subgradients with
//! `relu'(0) = 0` and `d|x|/dx = 0` at `x = 0`.

mod adam;
mod io;
pub mod loss;
mod train;

pub use adam::{adam_step, AdamParams, AdamState};
pub use io::{load_model, save_model};
pub use train::{lr_at_epoch, train, LossReport, TrainConfig};

use ndarray::Array2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMlpModel {
    /// input -> hidden 1, `d_in x d_hidden`
    pub w1: Array2<f64>,
    /// input -> hidden 2, `d_in x d_hidden`
    pub w2: Array2<f64>,
    /// hidden 1 -> hidden 2, `d_hidden x d_hidden`
    pub w3: Array2<f64>,
    /// input -> output, `d_in x d_out`
    pub w4: Array2<f64>,
    /// hidden 1 -> output, `d_hidden x d_out`
    pub w5: Array2<f64>,
    /// hidden 2 -> output, `d_hidden x d_out`
    pub w6: Array2<f64>,
}

/// Intermediate activations of one forward pass, reused by backprop.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    pub x: Array2<f64>,
    /// Pre-activation of hidden 1 (`x W1`).
    pub a1: Array2<f64>,
    pub h1: Array2<f64>,
    /// Pre-activation of hidden 2 (`x W2 + h1 W3`).
    pub a2: Array2<f64>,
    pub h2: Array2<f64>,
    /// Averaged output pre-activation (`(x W4 + h1 W5 + h2 W6) / 3`).
    pub z3: Array2<f64>,
    pub output: Array2<f64>,
}

/// Per-matrix gradients, shaped like the model.
#[derive(Debug, Clone)]
pub struct Gradients {
    pub w1: Array2<f64>,
    pub w2: Array2<f64>,
    pub w3: Array2<f64>,
    pub w4: Array2<f64>,
    pub w5: Array2<f64>,
    pub w6: Array2<f64>,
}

impl Gradients {
    pub fn matrices(&self) -> [&Array2<f64>; 6] {
        [&self.w1, &self.w2, &self.w3, &self.w4, &self.w5, &self.w6]
    }
}

fn relu(a: &Array2<f64>) -> Array2<f64> {
    a.mapv(|v| v.max(0.0))
}

/// 1 where the pre-activation is strictly positive; the subgradient at the
/// kink is taken as 0.
fn relu_mask(a: &Array2<f64>) -> Array2<f64> {
    a.mapv(|v| if v > 0.0 { 1.0 } else { 0.0 })
}

impl DenseMlpModel {
    /// Seeded uniform initialization, scaled per matrix so that every
    /// pre-activation starts O(1) and every output coordinate starts alive.
    ///
    /// Hidden-layer matrices draw zero-mean from `(-1/sqrt(fan_in),
    /// 1/sqrt(fan_in))` — the usual variance-preserving scale. The three
    /// matrices feeding the output layer instead draw non-negative from
    /// `[0, 1/fan_in)`. The network has no biases and its inputs (holiday
    /// flags, mean-scaled history) are non-negative, so with zero-mean output
    /// weights a sizeable fraction of output coordinates would start with a
    /// negative pre-activation on every training row. Such a coordinate
    /// predicts 0 forever — the ReLU blocks its gradient, nothing upstream
    /// can revive it, and each one pins a full hour's error at 100%. A
    /// non-negative draw keeps every output alive; its sums grow with
    /// fan_in * mean rather than sqrt(fan_in) * sd, so O(1) pre-activations
    /// need the 1/fan_in scale, and starting slightly under the data scale
    /// means early gradients push these weights up, away from the dead zone.
    pub fn new_random(d_in: usize, d_hidden: usize, d_out: usize, seed: u64) -> Self {
        assert!(
            d_in > 0 && d_hidden > 0 && d_out > 0,
            "model dimensions must be positive"
        );
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut symmetric = |rows: usize, cols: usize| -> Array2<f64> {
            let bound = 1.0 / (rows as f64).sqrt();
            let data: Vec<f64> = (0..rows * cols)
                .map(|_| rng.gen_range(-bound..bound))
                .collect();
            Array2::from_shape_vec((rows, cols), data).expect("shape matches data")
        };
        let w1 = symmetric(d_in, d_hidden);
        let w2 = symmetric(d_in, d_hidden);
        let w3 = symmetric(d_hidden, d_hidden);
        let mut non_negative = |rows: usize, cols: usize| -> Array2<f64> {
            let bound = 1.0 / rows as f64;
            let data: Vec<f64> = (0..rows * cols)
                .map(|_| rng.gen_range(0.0..bound))
                .collect();
            Array2::from_shape_vec((rows, cols), data).expect("shape matches data")
        };
        let w4 = non_negative(d_in, d_out);
        let w5 = non_negative(d_hidden, d_out);
        let w6 = non_negative(d_hidden, d_out);
        DenseMlpModel {
            w1,
            w2,
            w3,
            w4,
            w5,
            w6,
        }
    }

    /// Builds a model from explicit matrices, checking shape consistency and
    /// finiteness.
    pub fn from_weights(
        w1: Array2<f64>,
        w2: Array2<f64>,
        w3: Array2<f64>,
        w4: Array2<f64>,
        w5: Array2<f64>,
        w6: Array2<f64>,
    ) -> Result<Self> {
        let (d_in, d_hidden) = w1.dim();
        let d_out = w4.ncols();
        let expected = [
            ("w2", w2.dim(), (d_in, d_hidden)),
            ("w3", w3.dim(), (d_hidden, d_hidden)),
            ("w4", w4.dim(), (d_in, d_out)),
            ("w5", w5.dim(), (d_hidden, d_out)),
            ("w6", w6.dim(), (d_hidden, d_out)),
        ];
        for (name, got, want) in expected {
            if got != want {
                return Err(Error::Validation(format!(
                    "inconsistent model shapes: {name} is {got:?}, expected {want:?}"
                )));
            }
        }
        let model = DenseMlpModel {
            w1,
            w2,
            w3,
            w4,
            w5,
            w6,
        };
        if model
            .matrices()
            .iter()
            .any(|m| m.iter().any(|v| !v.is_finite()))
        {
            return Err(Error::Validation(
                "model contains non-finite weights".into(),
            ));
        }
        Ok(model)
    }

    /// `(d_in, d_hidden, d_out)`.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.w1.nrows(), self.w1.ncols(), self.w4.ncols())
    }

    pub fn matrices(&self) -> [&Array2<f64>; 6] {
        [&self.w1, &self.w2, &self.w3, &self.w4, &self.w5, &self.w6]
    }

    pub fn matrices_mut(&mut self) -> [&mut Array2<f64>; 6] {
        [
            &mut self.w1,
            &mut self.w2,
            &mut self.w3,
            &mut self.w4,
            &mut self.w5,
            &mut self.w6,
        ]
    }

    /// Forward pass over a batch, one input per row.
    pub fn forward_batch(&self, x: &Array2<f64>) -> ForwardCache {
        let (d_in, _, _) = self.dims();
        assert_eq!(
            x.ncols(),
            d_in,
            "input width {} does not match model d_in {}",
            x.ncols(),
            d_in
        );
        let a1 = x.dot(&self.w1);
        let h1 = relu(&a1);
        let a2 = x.dot(&self.w2) + h1.dot(&self.w3);
        let h2 = relu(&a2) * 0.5;
        let z3 = (x.dot(&self.w4) + h1.dot(&self.w5) + h2.dot(&self.w6)) / 3.0;
        let output = relu(&z3);
        ForwardCache {
            x: x.clone(),
            a1,
            h1,
            a2,
            h2,
            z3,
            output,
        }
    }

    /// Forward pass for a single input vector, returning the output and the
    /// cache needed to backpropagate through it.
    pub fn forward(&self, input: &[f64]) -> (Vec<f64>, ForwardCache) {
        let x = Array2::from_shape_vec((1, input.len()), input.to_vec())
            .expect("shape matches data");
        let cache = self.forward_batch(&x);
        (cache.output.row(0).to_vec(), cache)
    }

    /// Forward pass without keeping intermediates.
    pub fn predict(&self, input: &[f64]) -> Vec<f64> {
        self.forward(input).0
    }

    pub fn predict_batch(&self, x: &Array2<f64>) -> Array2<f64> {
        self.forward_batch(x).output
    }

    /// Backpropagates the batch loss through the cached activations.
    ///
    /// Returns the batch mean loss together with the gradients of every
    /// weight matrix.
    pub fn backward(&self, cache: &ForwardCache, actual: &Array2<f64>) -> Result<(f64, Gradients)> {
        let (batch_loss, g_out) = loss::batch_loss_and_grad(&cache.output, actual)?;

        // output = relu(z3), z3 = (x W4 + h1 W5 + h2 W6) / 3
        let g_a3 = (&g_out * &relu_mask(&cache.z3)) / 3.0;
        let g_w4 = cache.x.t().dot(&g_a3);
        let g_w5 = cache.h1.t().dot(&g_a3);
        let g_w6 = cache.h2.t().dot(&g_a3);

        // h2 = relu(a2) / 2
        let g_h2 = g_a3.dot(&self.w6.t());
        let g_a2 = (&g_h2 * &relu_mask(&cache.a2)) * 0.5;
        let g_w2 = cache.x.t().dot(&g_a2);
        let g_w3 = cache.h1.t().dot(&g_a2);

        // h1 = relu(a1), feeding both h2 and the output stage
        let g_h1 = g_a2.dot(&self.w3.t()) + g_a3.dot(&self.w5.t());
        let g_a1 = &g_h1 * &relu_mask(&cache.a1);
        let g_w1 = cache.x.t().dot(&g_a1);

        Ok((
            batch_loss,
            Gradients {
                w1: g_w1,
                w2: g_w2,
                w3: g_w3,
                w4: g_w4,
                w5: g_w5,
                w6: g_w6,
            },
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::arr2;

    fn scalar_model(w: f64) -> DenseMlpModel {
        let m = arr2(&[[w]]);
        DenseMlpModel::from_weights(
            m.clone(),
            m.clone(),
            m.clone(),
            m.clone(),
            m.clone(),
            m,
        )
        .unwrap()
    }

    #[test]
    fn scalar_toy_with_unit_weights() {
        let model = scalar_model(1.0);
        // x=3: h1=3, h2=(3+3)/2=3, out=(3+3+3)/3=3
        assert_eq!(model.predict(&[3.0]), vec![3.0]);
        // x=-2: every stage is cut off by the relu
        assert_eq!(model.predict(&[-2.0]), vec![0.0]);
    }

    #[test]
    fn hidden_stages_average_contributions() {
        let model = scalar_model(1.0);
        let (_, cache) = model.forward(&[6.0]);
        assert_eq!(cache.h1[[0, 0]], 6.0);
        assert_eq!(cache.a2[[0, 0]], 12.0);
        assert_eq!(cache.h2[[0, 0]], 6.0);
        assert_eq!(cache.z3[[0, 0]], 6.0);
    }

    #[test]
    fn from_weights_rejects_inconsistent_shapes() {
        let bad = DenseMlpModel::from_weights(
            Array2::zeros((4, 3)),
            Array2::zeros((4, 3)),
            Array2::zeros((3, 3)),
            Array2::zeros((4, 2)),
            Array2::zeros((3, 2)),
            Array2::zeros((2, 2)), // should be (3, 2)
        );
        assert!(matches!(bad, Err(Error::Validation(_))));
    }

    #[test]
    fn from_weights_rejects_non_finite() {
        let mut w = Array2::zeros((1, 1));
        w[[0, 0]] = f64::NAN;
        let ok = Array2::zeros((1, 1));
        assert!(DenseMlpModel::from_weights(
            w,
            ok.clone(),
            ok.clone(),
            ok.clone(),
            ok.clone(),
            ok
        )
        .is_err());
    }

    #[test]
    fn random_init_is_seeded_and_bounded() {
        let a = DenseMlpModel::new_random(6, 8, 4, 11);
        let b = DenseMlpModel::new_random(6, 8, 4, 11);
        let c = DenseMlpModel::new_random(6, 8, 4, 12);
        assert_eq!(a, b);
        assert_ne!(a, c);
        let bound = 1.0 / (6.0f64).sqrt();
        assert!(a.w1.iter().all(|v| (-bound..bound).contains(v)));
        assert!(a.w4.iter().all(|v| (0.0..1.0 / 6.0).contains(v)));
        let bound_h = 1.0 / (8.0f64).sqrt();
        assert!(a.w3.iter().all(|v| (-bound_h..bound_h).contains(v)));
        assert!(a.w5.iter().all(|v| (0.0..1.0 / 8.0).contains(v)));
    }

    #[test]
    fn gradients_vanish_when_prediction_matches_actual() {
        // sign(0) = 0 zeroes the loss gradient, so every weight gradient is 0.
        let model = scalar_model(0.8);
        let x = Array2::from_shape_vec((2, 1), vec![3.0, 5.0]).unwrap();
        let cache = model.forward_batch(&x);
        assert!(cache.output.iter().all(|v| *v > 0.0));
        let actual = cache.output.clone();
        let (loss, grads) = model.backward(&cache, &actual).unwrap();
        assert_eq!(loss, 0.0);
        for g in grads.matrices() {
            assert!(g.iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn backward_shapes_match_the_model() {
        let model = DenseMlpModel::new_random(6, 8, 4, 1);
        let x = Array2::from_elem((3, 6), 1.0);
        let y = Array2::from_elem((3, 4), 2.0);
        let cache = model.forward_batch(&x);
        let (_, grads) = model.backward(&cache, &y).unwrap();
        for (g, w) in grads.matrices().iter().zip(model.matrices()) {
            assert_eq!(g.dim(), w.dim());
        }
    }
}
