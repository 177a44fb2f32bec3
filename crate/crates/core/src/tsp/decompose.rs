use ndarray::Array2;

use super::spectral::{sft_basis, SpectralBasis};
use crate::cochain::Cochain;
use crate::complex::{hodge_laplacians, SimplicialComplex};
use crate::error::Result;

/// Orthogonal split of a cochain into gradient, curl and harmonic parts.
#[derive(Clone, Debug)]
pub struct HodgeParts {
    pub harmonic: Cochain,
    /// Component in `range(B_kᵀ)`.
    pub lower_induced: Cochain,
    /// Component in `range(B_{k+1})`.
    pub upper_induced: Cochain,
}

/// Projection onto the eigenvectors of `basis` with nonzero eigenvalue,
/// i.e. onto the range of the decomposed operator.
fn range_projection(basis: &SpectralBasis, x: &Array2<f64>) -> Array2<f64> {
    let thr = basis.zero_threshold();
    let start = basis.eigenvalues.iter().take_while(|&&l| l < thr).count();
    let u = basis.eigenvectors.slice(ndarray::s![.., start..]);
    u.dot(&u.t().dot(x))
}

/// Hodge decomposition of `x` on order `k`. The lower and upper parts are the
/// projections onto `range(L_{k,l})` and `range(L_{k,u})`; the harmonic part is
/// what remains.
pub fn hodge_decompose(complex: &SimplicialComplex, k: usize, x: &Cochain) -> Result<HodgeParts> {
    let triple = hodge_laplacians(complex, k)?;
    x.expect_rows(triple.size())?;
    let zeros = || Array2::zeros(x.values.raw_dim());
    let lower = match &triple.lower {
        Some(l) => range_projection(&sft_basis(l)?, &x.values),
        None => zeros(),
    };
    let upper = match &triple.upper {
        Some(u) => range_projection(&sft_basis(u)?, &x.values),
        None => zeros(),
    };
    let harmonic = &x.values - &lower - &upper;
    Ok(HodgeParts {
        harmonic: Cochain::new(k, harmonic),
        lower_induced: Cochain::new(k, lower),
        upper_induced: Cochain::new(k, upper),
    })
}

/// Orthonormal basis of the harmonic space `ker(L_k)` (one column per hole).
pub fn harmonic_basis(complex: &SimplicialComplex, k: usize) -> Result<Array2<f64>> {
    let basis = sft_basis(&hodge_laplacians(complex, k)?.full)?;
    let thr = basis.zero_threshold();
    let dim = basis.eigenvalues.iter().take_while(|&&l| l < thr).count();
    Ok(basis.eigenvectors.slice(ndarray::s![.., ..dim]).to_owned())
}
