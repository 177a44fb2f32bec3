//! Single-layer forward functions in their textbook form. The trainable
//! [`SimplicialNetwork`](super::SimplicialNetwork) runs the same arithmetic.

use ndarray::{Array1, Array2, Axis};

use super::activation::Activation;
use super::binarize::{feature_normalize, surrogate, BiOutputs, Mode};
use super::conv::{mpnn_pre_activation, tap_forward, LayerInput, MpnnParams, Operator, Tap};
use super::kernels::SignMatrix;
use crate::cochain::Cochain;
use crate::complex::{HodgeTriple, SparseSignedMatrix};
use crate::error::{Error, Result};

/// Weights of one SCNN-style layer: `gamma[j-1]` multiplies `L_lʲ`,
/// `theta[j-1]` multiplies `L_uʲ`, `xi` multiplies the input itself.
/// Taps for a missing adjacency are left empty.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerParams {
    pub gamma: Vec<Array2<f64>>,
    pub theta: Vec<Array2<f64>>,
    pub xi: Array2<f64>,
}

impl LayerParams {
    /// Taps and weights in the order the convolution expects.
    pub fn taps(&self) -> (Vec<Tap>, Vec<Array2<f64>>) {
        let mut taps = Vec::new();
        let mut weights = Vec::new();
        for (j, g) in self.gamma.iter().enumerate() {
            taps.push(Tap::new(Operator::Lower, j + 1));
            weights.push(g.clone());
        }
        for (j, t) in self.theta.iter().enumerate() {
            taps.push(Tap::new(Operator::Upper, j + 1));
            weights.push(t.clone());
        }
        taps.push(Tap::IDENTITY);
        weights.push(self.xi.clone());
        (taps, weights)
    }

    pub fn count(&self) -> usize {
        self.gamma.iter().chain(&self.theta).map(|w| w.len()).sum::<usize>() + self.xi.len()
    }

    fn check_adjacency(&self, triple: &HodgeTriple) -> Result<()> {
        if triple.lower.is_some() && self.gamma.is_empty() {
            return Err(Error::dims(format!("order {} needs at least one lower tap", triple.order)));
        }
        if triple.upper.is_some() && self.theta.is_empty() {
            return Err(Error::dims(format!("order {} needs at least one upper tap", triple.order)));
        }
        Ok(())
    }
}

/// `σ(Σ_j L_kʲ Z Γ_j)` with the full Laplacian.
pub fn snn_forward(triple: &HodgeTriple, z: &Cochain, gamma: &[Array2<f64>], act: Activation) -> Result<Cochain> {
    z.expect_rows(triple.size())?;
    if gamma.is_empty() {
        return Err(Error::dims("SNN layer needs at least one tap".to_string()));
    }
    let taps: Vec<Tap> = (1..=gamma.len()).map(|j| Tap::new(Operator::Full, j)).collect();
    let pre = tap_forward(triple, &taps, gamma, &LayerInput::Dense(&z.values))?;
    Ok(Cochain::new(z.order, act.apply(&pre)))
}

/// `σ(Σ_j L_lʲ Z Γ_j + Σ_j L_uʲ Z Θ_j + Z Ξ)`.
pub fn scnn_forward(triple: &HodgeTriple, z: &Cochain, params: &LayerParams, act: Activation) -> Result<Cochain> {
    z.expect_rows(triple.size())?;
    params.check_adjacency(triple)?;
    let (taps, weights) = params.taps();
    let pre = tap_forward(triple, &taps, &weights, &LayerInput::Dense(&z.values))?;
    Ok(Cochain::new(z.order, act.apply(&pre)))
}

/// `σ(B_kᵀ diag(γ) B_k Z + B_{k+1} diag(θ) B_{k+1}ᵀ Z)`.
pub fn mpnn_forward(
    boundary: Option<&SparseSignedMatrix>,
    coboundary: Option<&SparseSignedMatrix>,
    z: &Cochain,
    params: &MpnnParams,
    act: Activation,
) -> Result<Cochain> {
    let rows = boundary.map(|b| b.cols()).or(coboundary.map(|b| b.rows()));
    if let Some(rows) = rows {
        z.expect_rows(rows)?;
    }
    let pre = mpnn_pre_activation(boundary, coboundary, &z.values, params)?;
    Ok(Cochain::new(z.order, act.apply(&pre)))
}

/// One binarized layer: returns the input's row norms `m` and the binarized
/// output `q` of the length-1 convolution applied to the input's signs.
pub fn biscnn_layer_forward(triple: &HodgeTriple, z_in: &Cochain, params: &LayerParams, mode: Mode) -> Result<BiOutputs> {
    z_in.expect_rows(triple.size())?;
    if params.gamma.len() > 1 || params.theta.len() > 1 {
        return Err(Error::InvalidConfig("Bi-SCNN layers use length-1 filters".into()));
    }
    params.check_adjacency(triple)?;
    let m = feature_normalize(&z_in.values);
    let (s, _) = surrogate(&z_in.values, mode);
    let packed = SignMatrix::pack(&s.view());
    let (taps, weights) = params.taps();
    let pre = tap_forward(triple, &taps, &weights, &LayerInput::Signs(&s, &packed))?;
    let (q, _) = surrogate(&pre, mode);
    Ok(BiOutputs { m, q })
}

/// Runs binarized layers on the `q` path and returns `(∏_p m_p) ∘ q_P`.
/// With `keep_first_norm = false` the first layer's `m` is left out.
pub fn biscnn_network_forward(
    triple: &HodgeTriple,
    stack: &[LayerParams],
    x: &Cochain,
    mode: Mode,
    keep_first_norm: bool,
) -> Result<Cochain> {
    if stack.is_empty() {
        return Err(Error::InvalidConfig("Bi-SCNN network needs at least one layer".into()));
    }
    let mut norms = Array1::ones(x.rows());
    let mut current = x.clone();
    for (p, params) in stack.iter().enumerate() {
        let out = biscnn_layer_forward(triple, &current, params, mode)?;
        if p > 0 || keep_first_norm {
            norms *= &out.m;
        }
        current = Cochain::new(x.order, out.q);
    }
    let values = current.values * &norms.insert_axis(Axis(1));
    Ok(Cochain::new(x.order, values))
}
