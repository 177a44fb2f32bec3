use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cochain::Cochain;
use crate::error::{Error, Result};

/// Which feature entries are visible during training.
#[derive(Clone, Debug, PartialEq)]
pub struct Mask {
    pub known: Array2<bool>,
    pub rate: f64,
    pub seed: u64,
}

impl Mask {
    pub fn hidden(&self) -> usize {
        self.known.iter().filter(|k| !**k).count()
    }
}

/// Median of a non-empty slice, averaging the two middle values for even lengths.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    assert!(n > 0, "median of an empty slice");
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Hides exactly `floor(rate * N * d)` entries chosen uniformly without
/// replacement and fills them with the median of the visible entries.
pub fn mask_features(x: &Cochain, rate: f64, seed: u64) -> Result<(Cochain, Mask)> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::RateOutOfRange(rate));
    }
    let total = x.values.len();
    let hidden = (rate * total as f64).floor() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut known = Array2::from_elem(x.values.raw_dim(), true);
    let cols = x.cols();
    for flat in rand::seq::index::sample(&mut rng, total, hidden).into_iter() {
        known[[flat / cols, flat % cols]] = false;
    }
    let visible: Vec<f64> = x
        .values
        .iter()
        .zip(&known)
        .filter_map(|(&v, &k)| k.then_some(v))
        .collect();
    let mut filled = x.clone();
    if !visible.is_empty() {
        let fill = median(&visible);
        filled.values.zip_mut_with(&known, |v, &k| {
            if !k {
                *v = fill;
            }
        });
    }
    Ok((filled, Mask { known, rate, seed }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn hides_exact_count() {
        let x = Cochain::new(0, Array2::from_shape_fn((5, 2), |(i, j)| (i * 2 + j) as f64));
        let (_, mask) = mask_features(&x, 0.5, 1).unwrap();
        assert_eq!(mask.hidden(), 5);
        let (_, mask) = mask_features(&x, 0.15, 1).unwrap();
        assert_eq!(mask.hidden(), 1);
    }

    #[test]
    fn deterministic_under_seed() {
        let x = Cochain::new(0, Array2::from_shape_fn((40, 1), |(i, _)| i as f64));
        let a = mask_features(&x, 0.3, 7).unwrap();
        let b = mask_features(&x, 0.3, 7).unwrap();
        assert_eq!(a, b);
        let c = mask_features(&x, 0.3, 8).unwrap();
        assert_ne!(a.1.known, c.1.known);
    }

    #[test]
    fn constant_visible_values_fill_constant() {
        let x = Cochain::new(0, Array2::from_elem((10, 1), 4.0));
        let (filled, _) = mask_features(&x, 0.4, 3).unwrap();
        assert!(filled.values.iter().all(|v| *v == 4.0));
    }

    #[test]
    fn median_fill_and_rate_bounds() {
        let x = Cochain::new(0, array![[1.0], [2.0], [100.0], [3.0]]);
        let (filled, mask) = mask_features(&x, 0.25, 0).unwrap();
        let visible: Vec<f64> = x.values.iter().zip(&mask.known).filter(|(_, k)| **k).map(|(v, _)| *v).collect();
        let m = median(&visible);
        for (v, k) in filled.values.iter().zip(&mask.known) {
            if !k {
                assert_eq!(*v, m);
            }
        }
        for rate in [0.0, 1.0, 1.5] {
            assert!(matches!(mask_features(&x, rate, 0), Err(Error::RateOutOfRange(_))));
        }
        assert_eq!(median(&[3.0, 1.0, 2.0, 10.0]), 2.5);
    }
}
