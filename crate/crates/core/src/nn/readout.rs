//! Mean-pool, two affine layers and softmax, for classifying whole cochains.

use ndarray::{Array1, Array2, Axis};
use rand::Rng;

use super::activation::Activation;
use crate::error::{Error, Result};

pub const HIDDEN_WIDTH: usize = 30;

#[derive(Clone, Debug, PartialEq)]
pub struct ReadoutHead {
    pub w1: Array2<f64>,
    pub b1: Array1<f64>,
    pub w2: Array2<f64>,
    pub b2: Array1<f64>,
    pub activation: Activation,
}

/// Intermediates of a batched readout pass. Row `s` belongs to sample `s`.
#[derive(Clone, Debug)]
pub struct ReadoutTape {
    pub pooled: Array2<f64>,
    pub hidden_pre: Array2<f64>,
    pub hidden: Array2<f64>,
    pub probabilities: Array2<f64>,
    rows: Vec<usize>,
}

/// Row-wise softmax with max subtraction.
pub fn softmax(logits: &Array2<f64>) -> Array2<f64> {
    let mut out = logits.clone();
    for mut row in out.outer_iter_mut() {
        let max = row.fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        row.mapv_inplace(|v| (v - max).exp());
        let sum = row.sum();
        row /= sum;
    }
    out
}

impl ReadoutHead {
    pub fn new(features: usize, hidden: usize, classes: usize, activation: Activation, rng: &mut impl Rng) -> Self {
        let a1 = (6.0 / (features + hidden) as f64).sqrt();
        let a2 = (6.0 / (hidden + classes) as f64).sqrt();
        Self {
            w1: Array2::from_shape_simple_fn((features, hidden), || rng.random_range(-a1..=a1)),
            b1: Array1::zeros(hidden),
            w2: Array2::from_shape_simple_fn((hidden, classes), || rng.random_range(-a2..=a2)),
            b2: Array1::zeros(classes),
            activation,
        }
    }

    pub fn classes(&self) -> usize {
        self.w2.ncols()
    }

    pub fn count_parameters(&self) -> usize {
        self.w1.len() + self.b1.len() + self.w2.len() + self.b2.len()
    }

    /// Class probabilities for each sample.
    pub fn forward(&self, samples: &[Array2<f64>]) -> Result<ReadoutTape> {
        let f = self.w1.nrows();
        let mut pooled = Array2::zeros((samples.len(), f));
        let mut rows = Vec::with_capacity(samples.len());
        for (s, z) in samples.iter().enumerate() {
            if z.ncols() != f || z.nrows() == 0 {
                return Err(Error::dims(format!(
                    "readout expects non-empty samples with {f} features, got {:?}",
                    z.dim()
                )));
            }
            pooled.row_mut(s).assign(&z.mean_axis(Axis(0)).expect("non-empty"));
            rows.push(z.nrows());
        }
        let hidden_pre = pooled.dot(&self.w1) + &self.b1;
        let hidden = self.activation.apply(&hidden_pre);
        let logits = hidden.dot(&self.w2) + &self.b2;
        Ok(ReadoutTape {
            pooled,
            hidden_pre,
            hidden,
            probabilities: softmax(&logits),
            rows,
        })
    }

    /// Gradients for `d_logits` (one row per sample). Returns the parameter
    /// gradients `[w1, b1, w2, b2]` and one input gradient per sample.
    pub fn backward(&self, tape: &ReadoutTape, d_logits: &Array2<f64>) -> (ReadoutGrads, Vec<Array2<f64>>) {
        let d_w2 = tape.hidden.t().dot(d_logits);
        let d_b2 = d_logits.sum_axis(Axis(0));
        let d_hidden = d_logits.dot(&self.w2.t());
        let d_hpre = self.activation.backprop(&tape.hidden_pre, &d_hidden);
        let d_w1 = tape.pooled.t().dot(&d_hpre);
        let d_b1 = d_hpre.sum_axis(Axis(0));
        let d_pooled = d_hpre.dot(&self.w1.t());
        let inputs = tape
            .rows
            .iter()
            .enumerate()
            .map(|(s, &n)| {
                let row = d_pooled.row(s).mapv(|v| v / n as f64);
                let f = row.len();
                row.insert_axis(Axis(0)).broadcast((n, f)).expect("broadcast").to_owned()
            })
            .collect();
        (
            ReadoutGrads {
                w1: d_w1,
                b1: d_b1,
                w2: d_w2,
                b2: d_b2,
            },
            inputs,
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReadoutGrads {
    pub w1: Array2<f64>,
    pub b1: Array1<f64>,
    pub w2: Array2<f64>,
    pub b2: Array1<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn softmax_cases() {
        assert_eq!(softmax(&array![[0.0, 0.0]]), array![[0.5, 0.5]]);
        let a = softmax(&array![[1.0, -2.0, 0.5]]);
        let b = softmax(&array![[101.0, 98.0, 100.5]]);
        assert!((&a - &b).iter().all(|v| v.abs() < 1e-12));
        assert!((a.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn probabilities_sum_to_one_and_single_row_pools_to_itself() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let head = ReadoutHead::new(3, HIDDEN_WIDTH, 2, Activation::Tanh, &mut rng);
        let z = array![[0.2, -1.0, 4.0]];
        let tape = head.forward(&[z.clone(), array![[1.0, 1.0, 1.0], [3.0, -1.0, 0.0]]]).unwrap();
        assert_eq!(tape.pooled.row(0), z.row(0));
        for row in tape.probabilities.outer_iter() {
            assert!((row.sum() - 1.0).abs() < 1e-8);
        }
        assert!(head.forward(&[array![[1.0, 2.0]]]).is_err());
    }

    #[test]
    fn input_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let head = ReadoutHead::new(2, 4, 3, Activation::Tanh, &mut rng);
        let z = array![[0.3, -0.2], [1.0, 0.4]];
        let g = array![[0.5, -1.0, 0.25]];
        let loss = |z: &Array2<f64>| {
            let t = head.forward(std::slice::from_ref(z)).unwrap();
            let logits = t.hidden.dot(&head.w2) + &head.b2;
            (&logits * &g).sum()
        };
        let tape = head.forward(std::slice::from_ref(&z)).unwrap();
        let (_, dz) = head.backward(&tape, &g);
        let h = 1e-6;
        for idx in [(0, 0), (1, 1)] {
            let mut plus = z.clone();
            plus[idx] += h;
            let mut minus = z.clone();
            minus[idx] -= h;
            let fd = (loss(&plus) - loss(&minus)) / (2.0 * h);
            assert!((fd - dz[0][idx]).abs() < 1e-6);
        }
    }
}
