//! Parameter counting, both for this crate's models and under the convention
//! that reproduces the published citation-complex table.

use crate::complex::SimplicialComplex;
use crate::nn::{Architecture, NetworkSpec};

/// Adjacency flags `(has_lower, has_upper)` for every order of `complex`.
pub fn adjacency(complex: &SimplicialComplex) -> Vec<(bool, bool)> {
    let top = complex.order();
    (0..=top).map(|k| (k > 0, k < top)).collect()
}

/// Exact count for a tap-based network on an order with the given adjacency.
/// MPNN counts depend on simplex counts; use
/// [`SimplicialNetwork::count_parameters`](crate::nn::SimplicialNetwork::count_parameters).
pub fn tap_parameter_count(spec: &NetworkSpec, has_lower: bool, has_upper: bool) -> usize {
    let taps = spec.taps(has_lower, has_upper).len();
    spec.widths.windows(2).map(|w| taps * w[0] * w[1]).sum()
}

/// Count under the convention of the published table: one bias per output
/// channel in every layer, SNN with coefficients for `L⁰` and `L¹`, SCNN with
/// two coefficients per Laplacian plus the identity tap on every order
/// regardless of adjacency, Bi-SCNN with taps only for existing adjacencies.
/// Returns `None` for MPNN, whose published count is not reproducible from the
/// stated shapes.
pub fn reference_parameter_count(arch: Architecture, widths: &[usize], adjacency: &[(bool, bool)]) -> Option<usize> {
    let per_tap: usize = widths.windows(2).map(|w| w[0] * w[1]).sum();
    let biases: usize = widths[1..].iter().sum();
    let total = adjacency
        .iter()
        .map(|&(lower, upper)| {
            let taps = match arch {
                Architecture::Snn => 2,
                Architecture::Scnn => 5,
                Architecture::Biscnn => 1 + lower as usize + upper as usize,
                Architecture::Mpnn => return None,
            };
            Some(taps * per_tap + biases)
        })
        .sum::<Option<usize>>()?;
    Some(total)
}
