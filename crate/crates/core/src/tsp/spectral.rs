//! Simplicial Fourier transform: the eigendecomposition of a Hodge Laplacian.
//!
//! Uses a dense symmetric eigensolver, so the cost is cubic in `N_k`. Meant for
//! analysis and tests at sizes up to a few thousand simplices; the training
//! path never calls into this module.

use nalgebra::{DMatrix, SymmetricEigen};
use ndarray::{Array1, Array2};

use crate::cochain::Cochain;
use crate::complex::CsrMatrix;
use crate::error::{Error, Result};

/// Eigenvalues smaller in magnitude than this are treated as round-off and clamped to zero.
const CLAMP_TOLERANCE: f64 = 1e-10;

/// Relative gap below which two eigenvalues share an eigenspace.
pub const EIGENSPACE_TOLERANCE: f64 = 1e-8;

/// Orthonormal eigenbasis of a symmetric operator, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct SpectralBasis {
    pub eigenvectors: Array2<f64>,
    pub eigenvalues: Array1<f64>,
}

/// A group of (numerically) equal eigenvalues and the columns spanning them.
#[derive(Clone, Debug)]
pub struct Eigenspace {
    pub eigenvalue: f64,
    pub columns: std::ops::Range<usize>,
}

impl SpectralBasis {
    pub fn size(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(0.0, f64::max)
    }

    /// Threshold under which an eigenvalue counts as zero: `1e-8 * max(1, λ_max)`.
    pub fn zero_threshold(&self) -> f64 {
        EIGENSPACE_TOLERANCE * self.max_eigenvalue().max(1.0)
    }

    /// Consecutive runs of eigenvalues within the eigenspace tolerance.
    pub fn eigenspaces(&self) -> Vec<Eigenspace> {
        let tol = self.zero_threshold();
        let mut out: Vec<Eigenspace> = Vec::new();
        let mut start = 0;
        for i in 1..=self.size() {
            if i == self.size() || self.eigenvalues[i] - self.eigenvalues[i - 1] > tol {
                let span = start..i;
                let mean = self.eigenvalues.slice(ndarray::s![span.clone()]).mean().unwrap_or(0.0);
                out.push(Eigenspace {
                    eigenvalue: mean,
                    columns: span,
                });
                start = i;
            }
        }
        out
    }

    /// Orthogonal projector onto the span of the given columns.
    pub fn projector(&self, columns: std::ops::Range<usize>) -> Array2<f64> {
        let u = self.eigenvectors.slice(ndarray::s![.., columns]);
        u.dot(&u.t())
    }

    /// Projector onto the eigenvectors whose eigenvalue is below the zero threshold.
    pub fn kernel_projector(&self) -> Array2<f64> {
        let thr = self.zero_threshold();
        let dim = self.eigenvalues.iter().take_while(|&&l| l < thr).count();
        self.projector(0..dim)
    }
}

/// Eigendecomposition of a symmetric sparse matrix.
///
/// Eigenvector signs are fixed so that each column's largest-magnitude entry
/// is positive (first such index on ties).
pub fn sft_basis(laplacian: &CsrMatrix<f64>) -> Result<SpectralBasis> {
    let n = laplacian.rows();
    if laplacian.cols() != n {
        return Err(Error::dims(format!(
            "eigendecomposition needs a square matrix, got {:?}",
            laplacian.shape()
        )));
    }
    if n == 0 {
        return Ok(SpectralBasis {
            eigenvectors: Array2::zeros((0, 0)),
            eigenvalues: Array1::zeros(0),
        });
    }
    let dense = laplacian.to_dense();
    let m = DMatrix::from_fn(n, n, |r, c| dense[[r, c]]);
    let eig = SymmetricEigen::try_new(m, 1e-14, 10_000 * n.max(10))
        .ok_or_else(|| Error::ConvergenceFailure(format!("{n}x{n} symmetric matrix")))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut eigenvalues = Array1::zeros(n);
    let mut eigenvectors = Array2::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        let lambda = eig.eigenvalues[src];
        eigenvalues[dst] = if lambda < 0.0 && lambda >= -CLAMP_TOLERANCE {
            0.0
        } else {
            lambda
        };
        let col = eig.eigenvectors.column(src);
        let peak = col.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let pivot = col
            .iter()
            .position(|v| v.abs() >= peak - 1e-12)
            .unwrap_or(0);
        let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
        for r in 0..n {
            eigenvectors[[r, dst]] = sign * col[r];
        }
    }
    Ok(SpectralBasis {
        eigenvectors,
        eigenvalues,
    })
}

/// Spectral coefficients `Uᵀ x`.
pub fn sft_forward(basis: &SpectralBasis, x: &Cochain) -> Result<Cochain> {
    x.expect_rows(basis.size())?;
    Ok(Cochain::new(x.order, basis.eigenvectors.t().dot(&x.values)))
}

/// Reconstruction `U c` from spectral coefficients.
pub fn sft_inverse(basis: &SpectralBasis, coeffs: &Cochain) -> Result<Cochain> {
    coeffs.expect_rows(basis.size())?;
    Ok(Cochain::new(coeffs.order, basis.eigenvectors.dot(&coeffs.values)))
}

/// Per-eigenspace projection of `x`: sum over spaces of `h(λ) P_λ x`.
pub(crate) fn apply_spectral(
    basis: &SpectralBasis,
    x: &Array2<f64>,
    mut response: impl FnMut(f64) -> f64,
) -> Array2<f64> {
    let mut out = Array2::zeros(x.raw_dim());
    for space in basis.eigenspaces() {
        let gain = response(space.eigenvalue);
        if gain == 0.0 {
            continue;
        }
        let u = basis.eigenvectors.slice(ndarray::s![.., space.columns]);
        let coeff = u.t().dot(x);
        out.scaled_add(gain, &u.dot(&coeff));
    }
    out
}
