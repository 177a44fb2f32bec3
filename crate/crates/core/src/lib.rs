//! Topological signal processing on simplicial complexes and simplicial
//! neural networks (SNN, SCNN, simplicial MPNN and the binarized Bi-SCNN),
//! with hand-written reverse-mode gradients and Adam training loops.

pub mod cochain;
pub mod complex;
pub mod data;
pub mod error;
pub mod nn;
pub mod train;
pub mod tsp;

pub use cochain::Cochain;
pub use error::{Error, Result};
