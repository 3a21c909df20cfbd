//! Squared mean combined error, the quantity training minimizes.
//!
//! Per element the combined error (in percent) is the absolute percentage
//! error while that stays at or below 100%; beyond that — including when the
//! true value is zero — it switches to the absolute error normalized by the
//! row mean of the true vector, which keeps near-zero hours from dominating.
//! A row's loss is the square of its mean combined error; a batch's loss is
//! the mean of its row losses.
//!
//! The loss is invariant under scaling both vectors by the same positive
//! factor, so fitting in mean-scaled space is equivalent to fitting raw
//! values.

use ndarray::Array2;

use crate::error::{Error, Result};

/// Combined error of a single element, given the mean of the row's true
/// values (which must be positive).
pub fn combined_error(actual: f64, pred: f64, row_mean: f64) -> f64 {
    let ae = (actual - pred).abs();
    if actual != 0.0 {
        let ape = ae * 100.0 / actual.abs();
        if ape <= 100.0 {
            return ape;
        }
    }
    ae * 100.0 / row_mean
}

fn check_row(pred: &[f64], actual: &[f64]) -> Result<f64> {
    if pred.len() != actual.len() {
        return Err(Error::Validation(format!(
            "prediction has {} elements but actual has {}",
            pred.len(),
            actual.len()
        )));
    }
    if actual.is_empty() {
        return Err(Error::Validation("empty loss vectors".into()));
    }
    for (i, y) in actual.iter().enumerate() {
        if !y.is_finite() || *y < 0.0 {
            return Err(Error::Validation(format!(
                "actual value {y} at element {i} is not a finite non-negative number"
            )));
        }
    }
    for (i, p) in pred.iter().enumerate() {
        if !p.is_finite() {
            return Err(Error::Validation(format!(
                "non-finite prediction at element {i}"
            )));
        }
    }
    let mean = actual.iter().sum::<f64>() / actual.len() as f64;
    if mean == 0.0 {
        return Err(Error::ZeroMeanTarget);
    }
    Ok(mean)
}

/// Loss of one row: the squared mean combined error.
pub fn row_loss(pred: &[f64], actual: &[f64]) -> Result<f64> {
    let mean = check_row(pred, actual)?;
    let ce_sum: f64 = actual
        .iter()
        .zip(pred)
        .map(|(&y, &p)| combined_error(y, p, mean))
        .sum();
    let m = ce_sum / actual.len() as f64;
    Ok(m * m)
}

/// Mean row loss over a batch, one row per array row.
pub fn batch_loss(pred: &Array2<f64>, actual: &Array2<f64>) -> Result<f64> {
    Ok(batch_loss_and_grad(pred, actual)?.0)
}

/// Batch mean loss and its gradient with respect to the predictions.
///
/// Subgradient conventions: the absolute value contributes 0 at a tie, and
/// the branch a point sits in (percentage vs row-normalized) is decided by
/// the same comparison the loss uses.
pub(crate) fn batch_loss_and_grad(
    pred: &Array2<f64>,
    actual: &Array2<f64>,
) -> Result<(f64, Array2<f64>)> {
    if pred.dim() != actual.dim() {
        return Err(Error::Validation(format!(
            "prediction shape {:?} does not match actual shape {:?}",
            pred.dim(),
            actual.dim()
        )));
    }
    let (b, d) = pred.dim();
    let mut grad = Array2::zeros((b, d));
    let mut total = 0.0;
    for r in 0..b {
        let prow = pred.row(r);
        let yrow = actual.row(r);
        let prow = prow.as_slice().expect("standard layout");
        let yrow = yrow.as_slice().expect("standard layout");
        let mean = check_row(prow, yrow)?;

        let mut ce_sum = 0.0;
        for i in 0..d {
            ce_sum += combined_error(yrow[i], prow[i], mean);
        }
        let m = ce_sum / d as f64;
        total += m * m;

        // d(loss)/d(pred_i) = (2 m / d) * 100 * sign(pred_i - y_i) / denom_i,
        // averaged over the batch.
        let coeff = 2.0 * m / (b as f64 * d as f64);
        for i in 0..d {
            let y = yrow[i];
            let p = prow[i];
            let s = if p > y {
                1.0
            } else if p < y {
                -1.0
            } else {
                0.0
            };
            let denom = if y != 0.0 && (y - p).abs() * 100.0 / y.abs() <= 100.0 {
                y.abs()
            } else {
                mean
            };
            grad[[r, i]] = coeff * 100.0 * s / denom;
        }
    }
    Ok((total / b as f64, grad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn percentage_branch_when_at_most_100() {
        // |10 - 15| / 10 * 100 = 50
        assert_eq!(combined_error(10.0, 15.0, 10.0), 50.0);
        // Exactly 100 stays in the percentage branch.
        assert_eq!(combined_error(10.0, 20.0, 1000.0), 100.0);
    }

    #[test]
    fn row_normalized_branch_above_100_or_at_zero_actual() {
        // APE would be 400; row-normalized: |1 - 5| / 10 * 100 = 40
        assert_eq!(combined_error(1.0, 5.0, 10.0), 40.0);
        // Zero actual: APE is unusable, normalize by the row mean.
        assert_eq!(combined_error(0.0, 3.0, 10.0), 30.0);
    }

    #[test]
    fn row_loss_squares_the_mean_combined_error() {
        let pred = vec![15.0; 4];
        let actual = vec![10.0; 4];
        assert_eq!(row_loss(&pred, &actual).unwrap(), 2500.0);
        assert_eq!(row_loss(&actual, &actual).unwrap(), 0.0);
    }

    #[test]
    fn zero_mean_actual_is_rejected() {
        assert!(matches!(
            row_loss(&[1.0, 2.0], &[0.0, 0.0]),
            Err(Error::ZeroMeanTarget)
        ));
    }

    #[test]
    fn non_finite_and_negative_inputs_are_rejected() {
        assert!(row_loss(&[f64::NAN], &[1.0]).is_err());
        assert!(row_loss(&[1.0], &[-1.0]).is_err());
        assert!(row_loss(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn batch_loss_is_the_mean_of_row_losses() {
        let pred = Array2::from_shape_vec((2, 2), vec![15.0, 15.0, 1.0, 1.0]).unwrap();
        let actual = Array2::from_shape_vec((2, 2), vec![10.0, 10.0, 1.0, 1.0]).unwrap();
        let expected = (2500.0 + 0.0) / 2.0;
        assert_eq!(batch_loss(&pred, &actual).unwrap(), expected);
    }

    #[test]
    fn loss_is_scale_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let n = rng.gen_range(1..40);
            let actual: Vec<f64> = (0..n)
                .map(|_| {
                    if rng.gen_bool(0.1) {
                        0.0
                    } else {
                        rng.gen_range(0.01..50.0)
                    }
                })
                .collect();
            if actual.iter().sum::<f64>() == 0.0 {
                continue;
            }
            let pred: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..60.0)).collect();
            let base = row_loss(&pred, &actual).unwrap();
            for k in [0.1, 3.0, 100.0] {
                let pk: Vec<f64> = pred.iter().map(|v| v * k).collect();
                let ak: Vec<f64> = actual.iter().map(|v| v * k).collect();
                let scaled = row_loss(&pk, &ak).unwrap();
                assert!(
                    (scaled - base).abs() <= 1e-12 * base.max(1.0),
                    "loss {base} became {scaled} under k={k}"
                );
            }
        }
    }

    #[test]
    fn gradient_points_away_from_the_actual() {
        // pred > actual in the percentage branch: positive gradient.
        let pred = Array2::from_shape_vec((1, 2), vec![15.0, 10.0]).unwrap();
        let actual = Array2::from_shape_vec((1, 2), vec![10.0, 10.0]).unwrap();
        let (loss, grad) = batch_loss_and_grad(&pred, &actual).unwrap();
        // CEs are (50, 0): loss = 25^2.
        assert_eq!(loss, 625.0);
        // d/dp1 = (2*25/2) * 100 * 1 / 10 = 250
        assert_eq!(grad[[0, 0]], 250.0);
        // The matched element sits at the |.| kink: subgradient 0.
        assert_eq!(grad[[0, 1]], 0.0);
    }
}
