//! Simplicial convolutions: sums of Laplacian powers applied to features and
//! mixed by per-tap weight matrices, plus the incidence-weighted message
//! passing form.

use ndarray::{s, Array1, Array2, ArrayView2, Axis};

use super::kernels::SignMatrix;
use crate::complex::{CsrMatrix, HodgeTriple, SparseSignedMatrix};
use crate::error::{Error, Result};

/// Which operator a tap applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operator {
    Identity,
    Lower,
    Upper,
    Full,
}

/// One term `op^power · Z · W` of a convolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Tap {
    pub op: Operator,
    pub power: usize,
}

impl Tap {
    pub const IDENTITY: Tap = Tap {
        op: Operator::Identity,
        power: 0,
    };

    pub fn new(op: Operator, power: usize) -> Self {
        Self { op, power }
    }

    fn is_identity(&self) -> bool {
        self.op == Operator::Identity || self.power == 0
    }
}

pub(crate) fn operator(triple: &HodgeTriple, op: Operator) -> Option<&CsrMatrix<f64>> {
    match op {
        Operator::Identity => None,
        Operator::Lower => triple.lower.as_ref(),
        Operator::Upper => triple.upper.as_ref(),
        Operator::Full => Some(&triple.full),
    }
}

/// `op · X`, using the factored form of the lower and upper parts when cheaper.
fn apply(triple: &HodgeTriple, op: Operator, x: &Array2<f64>) -> Result<Array2<f64>> {
    match op {
        Operator::Identity => Ok(x.clone()),
        Operator::Lower => triple.apply_lower(&x.view()),
        Operator::Upper => triple.apply_upper(&x.view()),
        Operator::Full => triple.full.mul_dense(&x.view()),
    }
}

/// Layer input, optionally with a packed sign representation used for the
/// products that touch the raw input.
pub enum LayerInput<'a> {
    Dense(&'a Array2<f64>),
    Signs(&'a Array2<f64>, &'a SignMatrix),
}

impl LayerInput<'_> {
    pub fn values(&self) -> &Array2<f64> {
        match self {
            LayerInput::Dense(x) | LayerInput::Signs(x, _) => x,
        }
    }

    fn right_mul(&self, w: &ArrayView2<f64>) -> Array2<f64> {
        match self {
            LayerInput::Dense(x) => matmul(x, w),
            LayerInput::Signs(_, s) => s.mul(w),
        }
    }

    fn tr_mul(&self, g: &ArrayView2<f64>) -> Array2<f64> {
        match self {
            LayerInput::Dense(x) => tr_matmul(x, g),
            LayerInput::Signs(_, s) => s.tr_mul(g),
        }
    }
}

/// Below these sizes plain loops beat the packed GEMM.
const SMALL_PRODUCT: usize = 96;
const SMALL_WIDTH: usize = 4;

/// `X W`, with direct loops when `X` or `W` has only a few columns.
pub(crate) fn matmul(x: &Array2<f64>, w: &ArrayView2<f64>) -> Array2<f64> {
    let (n, a) = x.dim();
    let b = w.ncols();
    if a > SMALL_WIDTH && b > SMALL_WIDTH {
        return x.dot(w);
    }
    let x = x.as_standard_layout();
    let xs = x.as_slice().expect("standard layout");
    let w = w.as_standard_layout();
    let ws = w.as_slice().expect("standard layout");
    let mut out = vec![0.0; n * b];
    if b == 1 {
        for (o, row) in out.iter_mut().zip(xs.chunks(a.max(1))) {
            *o = row.iter().zip(ws).map(|(u, v)| u * v).sum();
        }
    } else {
        for (dst, row) in out.chunks_mut(b.max(1)).zip(xs.chunks(a.max(1))) {
            for (&u, wr) in row.iter().zip(ws.chunks(b)) {
                dst.iter_mut().zip(wr).for_each(|(o, &c)| *o += u * c);
            }
        }
    }
    Array2::from_shape_vec((n, b), out).expect("shape matches buffer")
}

/// `Xᵀ G`, with direct loops when the result is small.
pub(crate) fn tr_matmul(x: &Array2<f64>, g: &ArrayView2<f64>) -> Array2<f64> {
    let (a, b) = (x.ncols(), g.ncols());
    if a * b > SMALL_PRODUCT {
        return x.t().dot(g);
    }
    let x = x.as_standard_layout();
    let xs = x.as_slice().expect("standard layout");
    let g = g.as_standard_layout();
    let gs = g.as_slice().expect("standard layout");
    let mut acc = vec![0.0; a * b];
    for (xr, gr) in xs.chunks(a.max(1)).zip(gs.chunks(b.max(1))) {
        for (i, &u) in xr.iter().enumerate() {
            acc[i * b..(i + 1) * b].iter_mut().zip(gr).for_each(|(o, &v)| *o += u * v);
        }
    }
    Array2::from_shape_vec((a, b), acc).expect("shape matches buffer")
}

fn check_shapes(triple: &HodgeTriple, taps: &[Tap], weights: &[Array2<f64>], x: &Array2<f64>) -> Result<usize> {
    if taps.len() != weights.len() {
        return Err(Error::dims(format!("{} taps but {} weights", taps.len(), weights.len())));
    }
    if x.nrows() != triple.size() {
        return Err(Error::dims(format!(
            "input has {} rows, order {} has {} simplices",
            x.nrows(),
            triple.order,
            triple.size()
        )));
    }
    let d_out = weights.first().map_or(0, |w| w.ncols());
    for (tap, w) in taps.iter().zip(weights) {
        if w.nrows() != x.ncols() || w.ncols() != d_out {
            return Err(Error::dims(format!(
                "weight {:?} does not map {} input features to {d_out}",
                w.dim(),
                x.ncols()
            )));
        }
        if !tap.is_identity() && operator(triple, tap.op).is_none() {
            return Err(Error::dims(format!(
                "tap {:?} needs an adjacency that order {} does not have",
                tap.op, triple.order
            )));
        }
    }
    Ok(d_out)
}

fn operators_in(taps: &[Tap]) -> Vec<(Operator, usize)> {
    let mut out: Vec<(Operator, usize)> = Vec::new();
    for t in taps.iter().filter(|t| !t.is_identity()) {
        match out.iter_mut().find(|(op, _)| *op == t.op) {
            Some((_, p)) => *p = (*p).max(t.power),
            None => out.push((t.op, t.power)),
        }
    }
    out
}

/// Column blocks of a fused product: identity taps share one block (their
/// weights are summed), every other tap gets its own.
struct Layout {
    identity: Vec<usize>,
    /// `(op, power, tap index)`, block `1 + i` when `identity` is non-empty.
    others: Vec<(Operator, usize, usize)>,
}

impl Layout {
    fn new(taps: &[Tap]) -> Self {
        let identity = (0..taps.len()).filter(|&i| taps[i].is_identity()).collect();
        let others = taps
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.is_identity())
            .map(|(i, t)| (t.op, t.power, i))
            .collect();
        Self { identity, others }
    }

    fn first_other(&self) -> usize {
        !self.identity.is_empty() as usize
    }

    fn blocks(&self) -> usize {
        self.first_other() + self.others.len()
    }

    fn block_of(&self, op: Operator, power: usize) -> Option<usize> {
        self.others
            .iter()
            .position(|&(o, p, _)| o == op && p == power)
            .map(|i| self.first_other() + i)
    }

    /// Weights in block order; `transpose` stores each as `Wᵀ`.
    fn weights(&self, weights: &[Array2<f64>], transpose: bool) -> Vec<Array2<f64>> {
        let mut out = Vec::with_capacity(self.blocks());
        if let Some((&first, rest)) = self.identity.split_first() {
            let mut w = weights[first].clone();
            rest.iter().for_each(|&i| w += &weights[i]);
            out.push(w);
        }
        out.extend(self.others.iter().map(|&(_, _, i)| weights[i].clone()));
        if transpose {
            out.iter_mut().for_each(|w| *w = w.t().to_owned());
        }
        out
    }

    /// Per-tap gradients from per-block gradients.
    fn scatter(&self, blocks: Vec<Array2<f64>>, taps: usize) -> Vec<Array2<f64>> {
        let mut out: Vec<Option<Array2<f64>>> = vec![None; taps];
        let mut it = blocks.into_iter();
        if !self.identity.is_empty() {
            let g = it.next().expect("identity block");
            self.identity.iter().for_each(|&i| out[i] = Some(g.clone()));
        }
        for (&(_, _, i), g) in self.others.iter().zip(it) {
            out[i] = Some(g);
        }
        out.into_iter().map(|g| g.expect("every tap has a block")).collect()
    }

    /// `[X | op^p X | ...]` in block order, for narrow `X`.
    fn expand(&self, triple: &HodgeTriple, x: &Array2<f64>) -> Result<Array2<f64>> {
        let mut blocks: Vec<Option<Array2<f64>>> = vec![None; self.blocks()];
        if !self.identity.is_empty() {
            blocks[0] = Some(x.clone());
        }
        for (op, max_power) in operators_in_layout(self) {
            let mut power = x.clone();
            for p in 1..=max_power {
                power = apply(triple, op, &power)?;
                if let Some(b) = self.block_of(op, p) {
                    blocks[b] = Some(power.clone());
                }
            }
        }
        let views: Vec<_> = blocks.iter().map(|b| b.as_ref().expect("filled").view()).collect();
        Ok(ndarray::concatenate(Axis(1), &views).expect("blocks share rows"))
    }

    /// `Σ_op op(... op(op Y_P + Y_{P-1}) ...)` over the non-identity blocks of
    /// `y` (each `width` columns wide), plus the identity block itself.
    fn horner(&self, triple: &HodgeTriple, y: &Array2<f64>, width: usize) -> Result<Array2<f64>> {
        let block = |b: usize| y.slice(s![.., b * width..(b + 1) * width]);
        let mut out = if self.identity.is_empty() {
            Array2::zeros((y.nrows(), width))
        } else {
            block(0).to_owned()
        };
        for (op, max_power) in operators_in_layout(self) {
            let top = self.block_of(op, max_power).expect("max power has a tap");
            let mut acc = block(top).to_owned();
            for p in (1..max_power).rev() {
                acc = apply(triple, op, &acc)?;
                if let Some(b) = self.block_of(op, p) {
                    acc += &block(b);
                }
            }
            out += &apply(triple, op, &acc)?;
        }
        Ok(out)
    }
}

fn operators_in_layout(layout: &Layout) -> Vec<(Operator, usize)> {
    let taps: Vec<Tap> = layout.others.iter().map(|&(op, power, _)| Tap::new(op, power)).collect();
    operators_in(&taps)
}

fn split_columns(m: &Array2<f64>, width: usize) -> Vec<Array2<f64>> {
    (0..m.ncols() / width.max(1))
        .map(|b| m.slice(s![.., b * width..(b + 1) * width]).to_owned())
        .collect()
}

fn split_rows(m: &Array2<f64>, height: usize) -> Vec<Array2<f64>> {
    (0..m.nrows() / height.max(1))
        .map(|b| m.slice(s![b * height..(b + 1) * height, ..]).to_owned())
        .collect()
}

fn stack(axis: Axis, blocks: &[Array2<f64>]) -> Array2<f64> {
    let views: Vec<_> = blocks.iter().map(|b| b.view()).collect();
    ndarray::concatenate(axis, &views).expect("compatible blocks")
}

/// Pre-activation `Σ_t op_t^{p_t} X W_t`. Laplacian powers are applied on
/// whichever side of the weights is narrower, and all taps share one dense
/// product.
pub fn tap_forward(
    triple: &HodgeTriple,
    taps: &[Tap],
    weights: &[Array2<f64>],
    x: &LayerInput,
) -> Result<Array2<f64>> {
    let xv = x.values();
    let d_out = check_shapes(triple, taps, weights, xv)?;
    let layout = Layout::new(taps);
    if layout.blocks() == 0 {
        return Ok(Array2::zeros((xv.nrows(), d_out)));
    }
    let w = layout.weights(weights, false);
    if xv.ncols() <= d_out {
        let expanded = layout.expand(triple, xv)?;
        Ok(matmul(&expanded, &stack(Axis(0), &w).view()))
    } else {
        let y = x.right_mul(&stack(Axis(1), &w).view());
        layout.horner(triple, &y, d_out)
    }
}

/// Gradients of a tap convolution given `d_pre = ∂loss/∂(pre-activation)`.
/// Returns per-tap weight gradients and, if requested, the input gradient.
pub fn tap_backward(
    triple: &HodgeTriple,
    taps: &[Tap],
    weights: &[Array2<f64>],
    x: &LayerInput,
    d_pre: &Array2<f64>,
    need_input_grad: bool,
) -> Result<(Vec<Array2<f64>>, Option<Array2<f64>>)> {
    let xv = x.values();
    let d_out = check_shapes(triple, taps, weights, xv)?;
    let d_in = xv.ncols();
    let layout = Layout::new(taps);
    if layout.blocks() == 0 {
        return Ok((Vec::new(), need_input_grad.then(|| Array2::zeros(xv.raw_dim()))));
    }
    // Laplacians are symmetric, so (op^p X)ᵀ G = Xᵀ (op^p G).
    if d_in <= d_out {
        let expanded = layout.expand(triple, xv)?;
        let grads = split_rows(&tr_matmul(&expanded, &d_pre.view()), d_in);
        let d_input = if need_input_grad {
            let wt = stack(Axis(1), &layout.weights(weights, true));
            Some(layout.horner(triple, &matmul(d_pre, &wt.view()), d_in)?)
        } else {
            None
        };
        Ok((layout.scatter(grads, taps.len()), d_input))
    } else {
        let powers = layout.expand(triple, d_pre)?;
        let grads = split_columns(&x.tr_mul(&powers.view()), d_out);
        let d_input = if need_input_grad {
            let wt = stack(Axis(0), &layout.weights(weights, true));
            Some(matmul(&powers, &wt.view()))
        } else {
            None
        };
        Ok((layout.scatter(grads, taps.len()), d_input))
    }
}

/// Incidence-weighted message passing weights for one channel pair:
/// `γ` over the (k-1)-faces and `θ` over the (k+1)-cofaces.
#[derive(Clone, Debug, PartialEq)]
pub struct MpnnParams {
    pub gamma: Array1<f64>,
    pub theta: Array1<f64>,
}

/// `B_kᵀ diag(γ) B_k Z + B_{k+1} diag(θ) B_{k+1}ᵀ Z`, applied column-wise.
/// A missing incidence matrix drops its term; the matching vector must be empty.
pub fn mpnn_pre_activation(
    boundary: Option<&SparseSignedMatrix>,
    coboundary: Option<&SparseSignedMatrix>,
    z: &Array2<f64>,
    params: &MpnnParams,
) -> Result<Array2<f64>> {
    let mut out = Array2::zeros(z.raw_dim());
    if let Some(b) = boundary {
        if params.gamma.len() != b.rows() {
            return Err(Error::dims(format!(
                "gamma has length {}, boundary has {} rows",
                params.gamma.len(),
                b.rows()
            )));
        }
        let mut u = b.mul_dense(&z.view())?;
        u *= &params.gamma.view().insert_axis(ndarray::Axis(1));
        out += &b.tr_mul_dense(&u.view())?;
    } else if !params.gamma.is_empty() {
        return Err(Error::dims("gamma given but the order has no faces".to_string()));
    }
    if let Some(b) = coboundary {
        if params.theta.len() != b.cols() {
            return Err(Error::dims(format!(
                "theta has length {}, coboundary has {} columns",
                params.theta.len(),
                b.cols()
            )));
        }
        let mut u = b.tr_mul_dense(&z.view())?;
        u *= &params.theta.view().insert_axis(ndarray::Axis(1));
        out += &b.mul_dense(&u.view())?;
    } else if !params.theta.is_empty() {
        return Err(Error::dims("theta given but the order has no cofaces".to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{hodge_laplacians, incidence_matrix, SimplicialComplex};
    use ndarray::array;

    fn filled() -> (SimplicialComplex, HodgeTriple) {
        let c = SimplicialComplex::build(&[vec![], vec![], vec![vec![0, 1, 2]]]).unwrap();
        let t = hodge_laplacians(&c, 1).unwrap();
        (c, t)
    }

    #[test]
    fn association_order_does_not_change_result() {
        let (_, t) = filled();
        let taps = [Tap::new(Operator::Lower, 1), Tap::new(Operator::Lower, 2), Tap::new(Operator::Upper, 1)];
        let x = array![[0.5, -1.0], [2.0, 0.25], [-0.75, 1.5]];
        let narrow: Vec<Array2<f64>> = (0..3).map(|i| array![[1.0 + i as f64], [-0.5]]).collect();
        let wide: Vec<Array2<f64>> = (0..3)
            .map(|i| array![[1.0, i as f64, 0.5], [-0.5, 0.25, 2.0]])
            .collect();
        for weights in [narrow, wide] {
            let got = tap_forward(&t, &taps, &weights, &LayerInput::Dense(&x)).unwrap();
            let l = t.lower.as_ref().unwrap().to_dense();
            let u = t.upper.as_ref().unwrap().to_dense();
            let expected = l.dot(&x).dot(&weights[0]) + l.dot(&l).dot(&x).dot(&weights[1]) + u.dot(&x).dot(&weights[2]);
            assert!((&got - &expected).iter().all(|v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn missing_adjacency_is_rejected() {
        let c = SimplicialComplex::build(&[vec![], vec![], vec![vec![0, 1, 2]]]).unwrap();
        let t0 = hodge_laplacians(&c, 0).unwrap();
        let x = Array2::zeros((3, 1));
        let err = tap_forward(&t0, &[Tap::new(Operator::Lower, 1)], &[array![[1.0]]], &LayerInput::Dense(&x));
        assert!(matches!(err, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn mpnn_on_triangle_with_unit_weights() {
        let (c, _) = filled();
        let b1 = incidence_matrix(&c, 1).unwrap();
        let b2 = incidence_matrix(&c, 2).unwrap();
        let z = array![[1.0], [-2.0], [0.5]];
        let p = MpnnParams {
            gamma: Array1::ones(3),
            theta: Array1::ones(1),
        };
        let y = mpnn_pre_activation(Some(&b1), Some(&b2), &z, &p).unwrap();
        assert!((&y - &(&z * 3.0)).iter().all(|v| v.abs() < 1e-12));
        let bad = MpnnParams {
            gamma: Array1::ones(2),
            theta: Array1::ones(1),
        };
        assert!(mpnn_pre_activation(Some(&b1), Some(&b2), &z, &bad).is_err());
    }
}
