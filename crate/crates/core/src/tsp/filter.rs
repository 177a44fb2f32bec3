use std::fmt;

use ndarray::Array2;

use super::spectral::{apply_spectral, sft_basis};
use crate::cochain::Cochain;
use crate::complex::{CsrMatrix, HodgeTriple};
use crate::error::{Error, Result};

/// A simplicial filter, given either as a frequency response over the
/// Laplacian spectrum or as polynomial tap weights `w_0..w_J`.
pub enum FilterSpec {
    Response(Box<dyn Fn(f64) -> f64 + Send + Sync>),
    Polynomial(Vec<f64>),
}

impl FilterSpec {
    pub fn response(h: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        FilterSpec::Response(Box::new(h))
    }

    /// Passes eigenvalues strictly below `cutoff`.
    pub fn low_pass(cutoff: f64) -> Self {
        Self::response(move |l| if l < cutoff { 1.0 } else { 0.0 })
    }

    /// Passes eigenvalues at or above `cutoff`.
    pub fn high_pass(cutoff: f64) -> Self {
        Self::response(move |l| if l >= cutoff { 1.0 } else { 0.0 })
    }

    pub fn identity() -> Self {
        FilterSpec::Polynomial(vec![1.0])
    }

    pub fn gain(&self, lambda: f64) -> f64 {
        match self {
            FilterSpec::Response(h) => h(lambda),
            FilterSpec::Polynomial(w) => w.iter().rev().fold(0.0, |acc, &c| acc * lambda + c),
        }
    }
}

impl fmt::Debug for FilterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterSpec::Response(_) => f.write_str("FilterSpec::Response(..)"),
            FilterSpec::Polynomial(w) => f.debug_tuple("FilterSpec::Polynomial").field(w).finish(),
        }
    }
}

/// `U h(Λ) Uᵀ x`, evaluated per eigenspace so degenerate spectra are handled.
pub fn spectral_filter(laplacian: &CsrMatrix<f64>, spec: &FilterSpec, x: &Cochain) -> Result<Cochain> {
    x.expect_rows(laplacian.rows())?;
    let basis = sft_basis(laplacian)?;
    let mut bad = None;
    let y = apply_spectral(&basis, &x.values, |l| {
        let g = spec.gain(l);
        if !g.is_finite() {
            bad = Some(l);
        }
        g
    });
    if let Some(l) = bad {
        return Err(Error::InvalidConfig(format!(
            "filter response is not finite at eigenvalue {l}"
        )));
    }
    Ok(Cochain::new(x.order, y))
}

/// `Σ_j w_j L^j x` by repeated sparse products on the full Laplacian.
pub fn spatial_filter(triple: &HodgeTriple, coeffs: &[f64], x: &Cochain) -> Result<Cochain> {
    x.expect_rows(triple.size())?;
    if coeffs.is_empty() {
        return Err(Error::InvalidConfig("polynomial filter needs at least w_0".into()));
    }
    let mut power = x.values.clone();
    let mut out: Array2<f64> = &power * coeffs[0];
    for &w in &coeffs[1..] {
        power = triple.full.mul_dense(&power.view())?;
        out.scaled_add(w, &power);
    }
    Ok(Cochain::new(x.order, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{hodge_laplacians, SimplicialComplex};
    use ndarray::array;

    fn triple(lists: &[Vec<Vec<usize>>], k: usize) -> HodgeTriple {
        hodge_laplacians(&SimplicialComplex::build(lists).unwrap(), k).unwrap()
    }

    #[test]
    fn identity_filters() {
        let t = triple(&[vec![], vec![vec![0, 1], vec![1, 2], vec![0, 2]]], 1);
        let x = Cochain::from_signal(1, &[0.3, -2.0, 5.0]);
        let y = spectral_filter(&t.full, &FilterSpec::response(|_| 1.0), &x).unwrap();
        assert!((&y.values - &x.values).iter().all(|v| v.abs() < 1e-12));
        assert_eq!(spatial_filter(&t, &[1.0], &x).unwrap(), x);
    }

    #[test]
    fn scalar_spectrum_scales() {
        let t = triple(&[vec![], vec![], vec![vec![0, 1, 2]]], 1);
        let x = Cochain::from_signal(1, &[1.0, 2.0, -4.0]);
        let y = spectral_filter(&t.full, &FilterSpec::response(|l| l * l - 1.0), &x).unwrap();
        assert!((&y.values - &(&x.values * 8.0)).iter().all(|v| v.abs() < 1e-10));
        let y = spatial_filter(&t, &[0.0, 1.0], &x).unwrap();
        assert_eq!(y.values, &x.values * 3.0);
    }

    #[test]
    fn hollow_low_pass_projects_onto_cycle() {
        let t = triple(&[vec![], vec![vec![0, 1], vec![0, 2], vec![1, 2]]], 1);
        let x = Cochain::from_signal(1, &[1.0, 0.0, 0.0]);
        let y = spectral_filter(&t.full, &FilterSpec::low_pass(1e-6), &x).unwrap();
        let third = 1.0 / 3.0;
        let expected = array![[third], [-third], [third]];
        assert!((&y.values - &expected).iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn polynomial_gain_uses_horner() {
        let f = FilterSpec::Polynomial(vec![1.0, -2.0, 0.5]);
        assert_eq!(f.gain(2.0), 1.0 - 4.0 + 2.0);
    }

    #[test]
    fn rejects_non_finite_response() {
        let t = triple(&[vec![], vec![vec![0, 1]]], 1);
        let x = Cochain::from_signal(1, &[1.0]);
        assert!(spectral_filter(&t.full, &FilterSpec::response(|l| 1.0 / (l - 2.0)), &x).is_err());
    }
}
