//! Simplicial complexes, boundary operators and Hodge Laplacians.

mod hodge;
mod simplex;
mod sparse;

pub use hodge::{
    hodge_laplacians, incidence_matrix, verify_chain_property, ChainCheck, HodgeTriple,
    OrderOperators,
};
pub use simplex::{Simplex, SimplicialComplex};
pub use sparse::{CsrMatrix, Scalar, SparseSignedMatrix};
