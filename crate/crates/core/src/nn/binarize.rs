//! Sign binarization, the hard-tanh surrogate and per-row l1 normalization.

use ndarray::{Array1, Array2, Axis};
use serde::{Deserialize, Serialize};

use crate::cochain::Cochain;

/// Which sign surrogate the forward pass uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Hard-tanh values, so forward and straight-through backward agree.
    #[default]
    Train,
    /// Exact `Sign`, outputs in `{-1, +1}`.
    Infer,
}

/// Elementwise `Sign`: `+1` for `x >= 0`, `-1` otherwise.
pub fn sign_fn(x: &Array2<f64>) -> Array2<f64> {
    x.mapv(sign)
}

#[inline]
pub(crate) fn sign(v: f64) -> f64 {
    if v >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// `clamp(x, -1, 1)` and the straight-through mask `|x| <= 1`.
pub fn hard_tanh(x: &Array2<f64>) -> (Array2<f64>, Array2<f64>) {
    let value = x.mapv(|v| v.clamp(-1.0, 1.0));
    let mask = x.mapv(|v| if v.abs() <= 1.0 { 1.0 } else { 0.0 });
    (value, mask)
}

/// Sign surrogate for `mode`, returning values and the straight-through mask.
pub fn surrogate(x: &Array2<f64>, mode: Mode) -> (Array2<f64>, Array2<f64>) {
    match mode {
        Mode::Train => hard_tanh(x),
        Mode::Infer => {
            let mask = x.mapv(|v| if v.abs() <= 1.0 { 1.0 } else { 0.0 });
            (sign_fn(x), mask)
        }
    }
}

/// Per-row mean absolute value: `m_i = Σ_c |X_ic| / d`.
pub fn feature_normalize(x: &Array2<f64>) -> Array1<f64> {
    let d = x.ncols().max(1) as f64;
    x.map_axis(Axis(1), |row| row.iter().map(|v| v.abs()).sum::<f64>() / d)
}

/// The pair emitted by one binarized layer: magnitudes `m` and signs `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiOutputs {
    pub m: Array1<f64>,
    pub q: Array2<f64>,
}

impl BiOutputs {
    /// `m ∘ q` with `m` broadcast along rows.
    pub fn reconstruct(&self) -> Array2<f64> {
        scale_rows(&self.q, &self.m)
    }
}

/// Feature binarization `X ≈ m ∘ Sign(X)`.
pub fn binarize_features(x: &Cochain, mode: Mode) -> BiOutputs {
    BiOutputs {
        m: feature_normalize(&x.values),
        q: surrogate(&x.values, mode).0,
    }
}

/// Multiplies row `i` of `x` by `scale[i]`.
pub fn scale_rows(x: &Array2<f64>, scale: &Array1<f64>) -> Array2<f64> {
    x * &scale.view().insert_axis(Axis(1))
}
