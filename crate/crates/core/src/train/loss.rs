use ndarray::Array2;

use crate::error::{Error, Result};

/// Mean absolute error over entries where `known` is true, with its
/// subgradient (zero at exact equality and on unknown entries).
pub fn l1_loss(pred: &Array2<f64>, target: &Array2<f64>, known: &Array2<bool>) -> Result<(f64, Array2<f64>)> {
    if pred.dim() != target.dim() || pred.dim() != known.dim() {
        return Err(Error::dims(format!(
            "l1 loss shapes differ: pred {:?}, target {:?}, mask {:?}",
            pred.dim(),
            target.dim(),
            known.dim()
        )));
    }
    let count = known.iter().filter(|k| **k).count();
    if count == 0 {
        return Err(Error::EmptyMask);
    }
    let n = count as f64;
    let mut loss = 0.0;
    let mut grad = Array2::zeros(pred.raw_dim());
    ndarray::Zip::from(&mut grad)
        .and(pred)
        .and(target)
        .and(known)
        .for_each(|g, &p, &t, &k| {
            if k {
                let diff = p - t;
                loss += diff.abs();
                *g = if diff > 0.0 {
                    1.0 / n
                } else if diff < 0.0 {
                    -1.0 / n
                } else {
                    0.0
                };
            }
        });
    Ok((loss / n, grad))
}

/// Mean negative log-likelihood of `labels` under row-wise class
/// probabilities, and its gradient with respect to the softmax logits.
pub fn cross_entropy_loss(probs: &Array2<f64>, labels: &[usize]) -> Result<(f64, Array2<f64>)> {
    if probs.nrows() != labels.len() {
        return Err(Error::dims(format!(
            "{} probability rows but {} labels",
            probs.nrows(),
            labels.len()
        )));
    }
    let classes = probs.ncols();
    if let Some(&label) = labels.iter().find(|&&l| l >= classes) {
        return Err(Error::LabelOutOfRange { label, classes });
    }
    let n = labels.len().max(1) as f64;
    let mut grad = probs / n;
    let mut loss = 0.0;
    for (s, &label) in labels.iter().enumerate() {
        loss -= probs[[s, label]].max(f64::MIN_POSITIVE).ln();
        grad[[s, label]] -= 1.0 / n;
    }
    Ok((loss / n, grad))
}

/// Whether `pred` is within ±1% of `truth`; a zero truth needs `|pred| <= 1e-6`.
pub fn within_one_percent(pred: f64, truth: f64) -> bool {
    if truth == 0.0 {
        pred.abs() <= 1e-6
    } else {
        (pred - truth).abs() <= 0.01 * truth.abs()
    }
}
