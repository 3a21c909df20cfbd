//! Verify backpropagation against central finite differences.
//!
//! Builds small random models and rows, perturbs every weight coordinate by
//! ±h, and compares (loss(w+h) - loss(w-h)) / 2h with the analytic
//! gradient. Coordinates where the perturbation flips a ReLU activation or
//! the loss branch (kinks — the loss is piecewise there) are skipped.
//!
//!     cargo run --example gradient_check

use cellcast::model::{loss, DenseMlpModel};
use ndarray::Array2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const H: f64 = 1e-5;
const REL_TOL: f64 = 1e-3;

/// Activation signs of every ReLU stage; a FD probe is only trusted when
/// both endpoints land in the same linear region.
fn activation_pattern(model: &DenseMlpModel, x: &Array2<f64>) -> Vec<bool> {
    let cache = model.forward_batch(x);
    let mut pattern = Vec::new();
    for a in [&cache.a1, &cache.a2, &cache.z3] {
        pattern.extend(a.iter().map(|v| *v > 0.0));
    }
    pattern
}

/// Loss-branch choices (APE vs row-mean) for every output element.
fn branch_pattern(output: &Array2<f64>, actual: &Array2<f64>) -> Vec<bool> {
    output
        .iter()
        .zip(actual.iter())
        .map(|(p, y)| *y != 0.0 && (y - p).abs() * 100.0 / y.abs() <= 100.0)
        .collect()
}

fn main() {
    let started = std::time::Instant::now();
    let (d_in, d_hidden, d_out) = (6, 8, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);

    let mut checked = 0usize;
    let mut skipped = 0usize;
    let mut worst: f64 = 0.0;
    for pair in 0..100 {
        let model = DenseMlpModel::new_random(d_in, d_hidden, d_out, 1000 + pair);
        let x = Array2::from_shape_fn((1, d_in), |_| rng.gen_range(-1.5..1.5));
        let actual = Array2::from_shape_fn((1, d_out), |_| rng.gen_range(0.2..3.0));

        let cache = model.forward_batch(&x);
        let (_, grads) = model.backward(&cache, &actual).expect("positive targets");
        let analytic = grads.matrices();

        let base_pattern = activation_pattern(&model, &x);
        let base_branches = branch_pattern(&cache.output, &actual);

        for (w_idx, analytic_w) in analytic.iter().enumerate() {
            for idx in 0..analytic_w.len() {
                let (r, c) = (idx / analytic_w.ncols(), idx % analytic_w.ncols());
                let probe = |delta: f64| -> Option<f64> {
                    let mut m = model.clone();
                    m.matrices_mut()[w_idx][(r, c)] += delta;
                    if activation_pattern(&m, &x) != base_pattern {
                        return None;
                    }
                    let out = m.forward_batch(&x).output;
                    if branch_pattern(&out, &actual) != base_branches {
                        return None;
                    }
                    Some(loss::batch_loss(&out, &actual).expect("valid rows"))
                };
                let (Some(up), Some(down)) = (probe(H), probe(-H)) else {
                    skipped += 1;
                    continue;
                };
                let fd = (up - down) / (2.0 * H);
                let grad = analytic_w[(r, c)];
                let denom = fd.abs().max(grad.abs());
                if denom < 1e-6 {
                    // Both sides call it (numerically) zero; nothing to compare.
                    checked += 1;
                    continue;
                }
                let rel = (fd - grad).abs() / denom;
                worst = worst.max(rel);
                assert!(
                    rel <= REL_TOL,
                    "pair {pair}, W{} [{r},{c}]: analytic {grad}, finite difference {fd} (rel {rel:.2e})",
                    w_idx + 1
                );
                checked += 1;
            }
        }
    }

    println!(
        "checked {checked} coordinates across 100 model/row pairs \
         ({skipped} skipped at kinks); worst relative error {worst:.2e}"
    );
    println!("elapsed: {:.2?}", started.elapsed());
}
