//! Topological signal processing: simplicial Fourier transform, spectral and
//! polynomial filtering, Hodge decomposition.

mod decompose;
mod filter;
mod spectral;

pub use decompose::{harmonic_basis, hodge_decompose, HodgeParts};
pub use filter::{spatial_filter, spectral_filter, FilterSpec};
pub use spectral::{sft_basis, sft_forward, sft_inverse, Eigenspace, SpectralBasis, EIGENSPACE_TOLERANCE};
