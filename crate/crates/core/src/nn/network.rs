//! Trainable stacks of simplicial layers bound to one simplicial order, with a
//! recorded forward pass and exact reverse-mode gradients of the surrogate
//! network.

use ndarray::{Array1, Array2, Axis, Zip};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::activation::Activation;
use super::binarize::{sign, Mode};
use super::conv::{tap_backward, tap_forward, LayerInput, Operator, Tap};
use super::kernels::SignMatrix;
use crate::complex::OrderOperators;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Architecture {
    Snn,
    Scnn,
    Biscnn,
    Mpnn,
}

impl Architecture {
    pub const ALL: [Architecture; 4] = [Self::Snn, Self::Scnn, Self::Biscnn, Self::Mpnn];

    pub fn name(self) -> &'static str {
        match self {
            Architecture::Snn => "snn",
            Architecture::Scnn => "scnn",
            Architecture::Biscnn => "biscnn",
            Architecture::Mpnn => "mpnn",
        }
    }
}

impl std::str::FromStr for Architecture {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "").as_str() {
            "snn" => Ok(Self::Snn),
            "scnn" => Ok(Self::Scnn),
            "biscnn" => Ok(Self::Biscnn),
            "mpnn" => Ok(Self::Mpnn),
            other => Err(format!("unknown architecture '{other}' (expected snn, scnn, biscnn, mpnn)")),
        }
    }
}

/// Shape and hyperparameters of a simplicial network.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub arch: Architecture,
    /// Feature widths `[d_in, d_1, ..., d_P]`; `P = widths.len() - 1` layers.
    pub widths: Vec<usize>,
    /// Filter length on the lower Laplacian (the full Laplacian for SNN).
    pub lower_taps: usize,
    /// Filter length on the upper Laplacian.
    pub upper_taps: usize,
    /// Adds a `j = 0` tap to every Laplacian sum, as in the reference SNN/SCNN code.
    pub zero_taps: bool,
    /// Nonlinearity for SNN/SCNN/MPNN layers. Bi-SCNN ignores it.
    pub activation: Activation,
    /// Include the first layer's normalization vector in the Bi-SCNN output product.
    pub keep_first_norm: bool,
}

impl NetworkSpec {
    pub fn new(arch: Architecture, widths: Vec<usize>, activation: Activation) -> Self {
        Self {
            arch,
            widths,
            lower_taps: 1,
            upper_taps: 1,
            zero_taps: false,
            activation,
            keep_first_norm: true,
        }
    }

    pub fn layers(&self) -> usize {
        self.widths.len().saturating_sub(1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.layers() == 0 || self.widths.contains(&0) {
            return Err(Error::InvalidConfig(format!(
                "network needs at least one layer and positive widths, got {:?}",
                self.widths
            )));
        }
        match self.arch {
            Architecture::Biscnn if self.lower_taps != 1 || self.upper_taps != 1 || self.zero_taps => {
                Err(Error::InvalidConfig("Bi-SCNN layers use length-1 filters".into()))
            }
            Architecture::Snn | Architecture::Scnn if self.lower_taps == 0 => {
                Err(Error::InvalidConfig("filter length must be at least 1".into()))
            }
            Architecture::Scnn if self.upper_taps == 0 => {
                Err(Error::InvalidConfig("filter length must be at least 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// Taps of one convolutional layer on an order with the given adjacencies.
    /// Missing adjacencies remove their taps entirely.
    pub fn taps(&self, has_lower: bool, has_upper: bool) -> Vec<Tap> {
        let first = if self.zero_taps { 0 } else { 1 };
        let mut taps = Vec::new();
        match self.arch {
            Architecture::Snn => {
                taps.extend((first..=self.lower_taps).map(|j| Tap::new(Operator::Full, j)));
            }
            Architecture::Scnn | Architecture::Biscnn => {
                if has_lower {
                    taps.extend((first..=self.lower_taps).map(|j| Tap::new(Operator::Lower, j)));
                }
                if has_upper {
                    taps.extend((first..=self.upper_taps).map(|j| Tap::new(Operator::Upper, j)));
                }
                taps.push(Tap::IDENTITY);
            }
            Architecture::Mpnn => {}
        }
        taps
    }
}

/// Weights of one layer.
#[derive(Clone, Debug, PartialEq)]
pub enum LayerWeights {
    Taps {
        taps: Vec<Tap>,
        weights: Vec<Array2<f64>>,
    },
    /// Row `c * d_out + o` of `gamma`/`theta` weights the path from input
    /// channel `c` to output channel `o`.
    Mpnn {
        d_in: usize,
        d_out: usize,
        gamma: Option<Array2<f64>>,
        theta: Option<Array2<f64>>,
    },
}

impl LayerWeights {
    fn params(&self) -> Vec<&Array2<f64>> {
        match self {
            LayerWeights::Taps { weights, .. } => weights.iter().collect(),
            LayerWeights::Mpnn { gamma, theta, .. } => gamma.iter().chain(theta.iter()).collect(),
        }
    }

    fn params_mut(&mut self) -> Vec<&mut Array2<f64>> {
        match self {
            LayerWeights::Taps { weights, .. } => weights.iter_mut().collect(),
            LayerWeights::Mpnn { gamma, theta, .. } => gamma.iter_mut().chain(theta.iter_mut()).collect(),
        }
    }
}

fn uniform_init(rng: &mut impl Rng, rows: usize, cols: usize, fan_in: usize, fan_out: usize) -> Array2<f64> {
    let a = (6.0 / (fan_in + fan_out) as f64).sqrt();
    Array2::from_shape_simple_fn((rows, cols), || rng.random_range(-a..=a))
}

/// A stack of simplicial layers for one order `k`.
#[derive(Clone, Debug)]
pub struct SimplicialNetwork {
    spec: NetworkSpec,
    order: usize,
    layers: Vec<LayerWeights>,
    generation: u64,
}

/// Intermediates of one layer's forward pass.
#[derive(Clone, Debug)]
pub enum LayerRecord {
    Dense {
        input: Array2<f64>,
        pre: Array2<f64>,
    },
    Binary {
        /// Layer input before binarization (raw features for layer 1, `q` after).
        input: Array2<f64>,
        /// Surrogate of `input`; `None` when it equals `input`.
        signs: Option<Array2<f64>>,
        packed: SignMatrix,
        pre: Array2<f64>,
        m: Array1<f64>,
    },
}

/// Recorded forward pass.
#[derive(Clone, Debug)]
pub struct Tape {
    generation: u64,
    pub mode: Mode,
    pub records: Vec<LayerRecord>,
    pub output: Array2<f64>,
}

impl Tape {
    /// Per layer, the fraction of binarized layer-input entries that are exactly ±1.
    pub fn saturated_fractions(&self) -> Vec<f64> {
        self.records
            .iter()
            .filter_map(|r| match r {
                LayerRecord::Binary { packed, .. } => Some(packed.saturated_fraction()),
                LayerRecord::Dense { .. } => None,
            })
            .collect()
    }
}

impl SimplicialNetwork {
    pub fn new(spec: NetworkSpec, ops: &OrderOperators, rng: &mut impl Rng) -> Result<Self> {
        spec.validate()?;
        let has_lower = ops.triple.lower.is_some();
        let has_upper = ops.triple.upper.is_some();
        let mut layers = Vec::with_capacity(spec.layers());
        for w in spec.widths.windows(2) {
            let (d_in, d_out) = (w[0], w[1]);
            let layer = match spec.arch {
                Architecture::Mpnn => {
                    let gamma = ops
                        .boundary
                        .as_ref()
                        .map(|b| uniform_init(rng, d_in * d_out, b.rows(), d_in, d_out));
                    let theta = ops
                        .coboundary
                        .as_ref()
                        .map(|b| uniform_init(rng, d_in * d_out, b.cols(), d_in, d_out));
                    LayerWeights::Mpnn {
                        d_in,
                        d_out,
                        gamma,
                        theta,
                    }
                }
                _ => {
                    let taps = spec.taps(has_lower, has_upper);
                    let weights = taps
                        .iter()
                        .map(|_| uniform_init(rng, d_in, d_out, d_in, d_out))
                        .collect();
                    LayerWeights::Taps { taps, weights }
                }
            };
            layers.push(layer);
        }
        Ok(Self {
            spec,
            order: ops.order(),
            layers,
            generation: 0,
        })
    }

    /// Builds a network from explicit weights.
    pub fn from_weights(spec: NetworkSpec, order: usize, layers: Vec<LayerWeights>) -> Result<Self> {
        spec.validate()?;
        if layers.len() != spec.layers() {
            return Err(Error::InvalidConfig(format!(
                "{} layers given, spec has {}",
                layers.len(),
                spec.layers()
            )));
        }
        Ok(Self {
            spec,
            order,
            layers,
            generation: 0,
        })
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn layers(&self) -> &[LayerWeights] {
        &self.layers
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    /// All trainable matrices, layer by layer.
    pub fn parameters(&self) -> Vec<&Array2<f64>> {
        self.layers.iter().flat_map(LayerWeights::params).collect()
    }

    /// Mutable access to the parameters. Invalidates every recorded tape.
    pub fn parameters_mut(&mut self) -> Vec<&mut Array2<f64>> {
        self.generation += 1;
        self.layers.iter_mut().flat_map(LayerWeights::params_mut).collect()
    }

    /// Number of trainable scalars.
    pub fn count_parameters(&self) -> usize {
        self.parameters().iter().map(|p| p.len()).sum()
    }

    fn check_ops(&self, ops: &OrderOperators) -> Result<()> {
        if ops.order() != self.order {
            return Err(Error::dims(format!(
                "network is bound to order {}, operators are for order {}",
                self.order,
                ops.order()
            )));
        }
        Ok(())
    }

    pub fn forward(&self, ops: &OrderOperators, x: &Array2<f64>, mode: Mode) -> Result<Tape> {
        self.check_ops(ops)?;
        if x.ncols() != self.spec.widths[0] {
            return Err(Error::dims(format!(
                "input has {} features, network expects {}",
                x.ncols(),
                self.spec.widths[0]
            )));
        }
        let mut records = Vec::with_capacity(self.layers.len());
        let mut current = x.clone();
        for layer in &self.layers {
            let record = match (self.spec.arch, layer) {
                (Architecture::Biscnn, LayerWeights::Taps { taps, weights }) => {
                    let input = std::mem::take(&mut current);
                    let (signs, m) = binarize_rows(&input, mode);
                    let view = signs.as_ref().unwrap_or(&input);
                    let packed = SignMatrix::pack(&view.view());
                    let pre = tap_forward(&ops.triple, taps, weights, &LayerInput::Signs(view, &packed))?;
                    current = surrogate_values(&pre, mode);
                    LayerRecord::Binary {
                        input,
                        signs,
                        packed,
                        pre,
                        m,
                    }
                }
                (_, LayerWeights::Taps { taps, weights }) => {
                    let pre = tap_forward(&ops.triple, taps, weights, &LayerInput::Dense(&current))?;
                    let next = self.spec.activation.apply(&pre);
                    LayerRecord::Dense {
                        input: std::mem::replace(&mut current, next),
                        pre,
                    }
                }
                (_, LayerWeights::Mpnn { .. }) => {
                    let pre = mpnn_layer_forward(ops, layer, &current)?;
                    let next = self.spec.activation.apply(&pre);
                    LayerRecord::Dense {
                        input: std::mem::replace(&mut current, next),
                        pre,
                    }
                }
            };
            records.push(record);
        }
        let output = if self.spec.arch == Architecture::Biscnn {
            let norms = self.norm_product(&records, None);
            &current * &norms.insert_axis(Axis(1))
        } else {
            current
        };
        Ok(Tape {
            generation: self.generation,
            mode,
            records,
            output,
        })
    }

    /// Product of the recorded normalization vectors, optionally skipping one layer.
    fn norm_product(&self, records: &[LayerRecord], skip: Option<usize>) -> Array1<f64> {
        let n = records.first().map_or(0, |r| match r {
            LayerRecord::Binary { m, .. } => m.len(),
            LayerRecord::Dense { pre, .. } => pre.nrows(),
        });
        let mut prod = Array1::ones(n);
        for (p, r) in records.iter().enumerate() {
            if Some(p) == skip || (p == 0 && !self.spec.keep_first_norm) {
                continue;
            }
            if let LayerRecord::Binary { m, .. } = r {
                prod *= m;
            }
        }
        prod
    }

    /// Reverse-mode gradients of `Σ d_output ∘ output` with respect to every
    /// parameter, in [`parameters`](Self::parameters) order. Bi-SCNN uses the
    /// hard-tanh straight-through mask in place of the derivative of `Sign`.
    pub fn backward(&self, ops: &OrderOperators, tape: &Tape, d_output: &Array2<f64>) -> Result<Vec<Array2<f64>>> {
        if tape.generation != self.generation {
            return Err(Error::StaleTape {
                recorded: tape.generation,
                current: self.generation,
            });
        }
        self.check_ops(ops)?;
        if d_output.dim() != tape.output.dim() {
            return Err(Error::dims(format!(
                "output gradient {:?} does not match output {:?}",
                d_output.dim(),
                tape.output.dim()
            )));
        }
        let layers = self.layers.len();
        let mut per_layer: Vec<Vec<Array2<f64>>> = vec![Vec::new(); layers];

        if self.spec.arch == Architecture::Biscnn {
            let last_q = match &tape.records[layers - 1] {
                LayerRecord::Binary { pre, .. } => surrogate_values(pre, tape.mode),
                LayerRecord::Dense { .. } => unreachable!("Bi-SCNN records are binary"),
            };
            // output = (Π_p m_p) ∘ q_P
            let norms = self.norm_product(&tape.records, None);
            let mut d_q = d_output * &norms.view().insert_axis(Axis(1));
            let row_dot = (d_output * &last_q).sum_axis(Axis(1));

            for p in (0..layers).rev() {
                let LayerRecord::Binary {
                    input,
                    signs,
                    packed,
                    pre,
                    ..
                } = &tape.records[p]
                else {
                    unreachable!("Bi-SCNN records are binary")
                };
                let LayerWeights::Taps { taps, weights } = &self.layers[p] else {
                    unreachable!("Bi-SCNN layers use taps")
                };
                Zip::from(&mut d_q).and(pre).for_each(|g, &v| {
                    if v.abs() > 1.0 {
                        *g = 0.0;
                    }
                });
                let view = signs.as_ref().unwrap_or(input);
                let (grads, d_signs) =
                    tap_backward(&ops.triple, taps, weights, &LayerInput::Signs(view, packed), &d_q, p > 0)?;
                per_layer[p] = grads;
                if p == 0 {
                    break;
                }
                // gradient into the previous layer's q through the sign path
                // (straight-through mask) and through m_p = mean |input|
                let mut d_input = d_signs.expect("requested");
                let d_m = &row_dot * &self.norm_product(&tape.records, Some(p));
                let d = input.ncols() as f64;
                Zip::from(d_input.rows_mut())
                    .and(input.rows())
                    .and(&d_m)
                    .for_each(|mut g, x, &dm| {
                        let via_norm = dm / d;
                        g.iter_mut().zip(x).for_each(|(g, &v)| {
                            if v.abs() > 1.0 {
                                *g = 0.0;
                            }
                            if v != 0.0 {
                                *g += sign(v) * via_norm;
                            }
                        });
                    });
                d_q = d_input;
            }
        } else {
            let mut upstream = d_output.clone();
            for p in (0..layers).rev() {
                let LayerRecord::Dense { input, pre } = &tape.records[p] else {
                    unreachable!("dense architectures record dense layers")
                };
                let d_pre = self.spec.activation.backprop(pre, &upstream);
                let (grads, d_input) = match &self.layers[p] {
                    LayerWeights::Taps { taps, weights } => {
                        tap_backward(&ops.triple, taps, weights, &LayerInput::Dense(input), &d_pre, p > 0)?
                    }
                    layer @ LayerWeights::Mpnn { .. } => mpnn_layer_backward(ops, layer, input, &d_pre, p > 0)?,
                };
                per_layer[p] = grads;
                match d_input {
                    Some(g) => upstream = g,
                    None => break,
                }
            }
        }
        Ok(per_layer.into_iter().flatten().collect())
    }
}

/// Surrogate values without the mask.
fn surrogate_values(x: &Array2<f64>, mode: Mode) -> Array2<f64> {
    match mode {
        Mode::Train => x.mapv(|v| v.clamp(-1.0, 1.0)),
        Mode::Infer => x.mapv(sign),
    }
}

/// Row norms `mean |x|` and the surrogate of `x`, skipping the copy when the
/// surrogate would leave `x` unchanged.
fn binarize_rows(x: &Array2<f64>, mode: Mode) -> (Option<Array2<f64>>, Array1<f64>) {
    let d = x.ncols().max(1) as f64;
    let mut unchanged = true;
    let m = Array1::from_iter(x.rows().into_iter().map(|row| {
        row.iter().fold(0.0, |acc, &v| {
            unchanged &= match mode {
                Mode::Train => v.abs() <= 1.0,
                Mode::Infer => v == 1.0 || v == -1.0,
            };
            acc + v.abs()
        }) / d
    }));
    let signs = (!unchanged).then(|| surrogate_values(x, mode));
    (signs, m)
}

/// `V[:, o] = Σ_c w[c * d_out + o] ∘ U[:, c]`.
fn mix(u: &Array2<f64>, w: &Array2<f64>, d_out: usize) -> Array2<f64> {
    let mut v = Array2::zeros((u.nrows(), d_out));
    for c in 0..u.ncols() {
        let uc = u.column(c);
        for o in 0..d_out {
            let wr = w.row(c * d_out + o);
            let mut vo = v.column_mut(o);
            ndarray::Zip::from(&mut vo).and(&uc).and(&wr).for_each(|a, &x, &g| *a += g * x);
        }
    }
    v
}

/// Backward of [`mix`]: returns `(dW, dU)`.
fn mix_backward(u: &Array2<f64>, w: &Array2<f64>, h: &Array2<f64>) -> (Array2<f64>, Array2<f64>) {
    let d_out = h.ncols();
    let mut dw = Array2::zeros(w.raw_dim());
    let mut du = Array2::zeros(u.raw_dim());
    for c in 0..u.ncols() {
        for o in 0..d_out {
            let idx = c * d_out + o;
            let mut row = dw.row_mut(idx);
            ndarray::Zip::from(&mut row)
                .and(&u.column(c))
                .and(&h.column(o))
                .for_each(|g, &x, &y| *g = x * y);
            let mut duc = du.column_mut(c);
            ndarray::Zip::from(&mut duc)
                .and(&w.row(idx))
                .and(&h.column(o))
                .for_each(|g, &a, &y| *g += a * y);
        }
    }
    (dw, du)
}

fn mpnn_layer_forward(ops: &OrderOperators, layer: &LayerWeights, z: &Array2<f64>) -> Result<Array2<f64>> {
    let LayerWeights::Mpnn {
        d_in,
        d_out,
        gamma,
        theta,
    } = layer
    else {
        unreachable!("called with an MPNN layer")
    };
    if z.ncols() != *d_in {
        return Err(Error::dims(format!("MPNN layer expects {d_in} features, got {}", z.ncols())));
    }
    let mut out = Array2::zeros((z.nrows(), *d_out));
    if let (Some(b), Some(g)) = (&ops.boundary, gamma) {
        let u = b.mul_dense(&z.view())?;
        out += &b.tr_mul_dense(&mix(&u, g, *d_out).view())?;
    }
    if let (Some(b), Some(t)) = (&ops.coboundary, theta) {
        let u = b.tr_mul_dense(&z.view())?;
        out += &b.mul_dense(&mix(&u, t, *d_out).view())?;
    }
    Ok(out)
}

fn mpnn_layer_backward(
    ops: &OrderOperators,
    layer: &LayerWeights,
    z: &Array2<f64>,
    d_pre: &Array2<f64>,
    need_input_grad: bool,
) -> Result<(Vec<Array2<f64>>, Option<Array2<f64>>)> {
    let LayerWeights::Mpnn { gamma, theta, .. } = layer else {
        unreachable!("called with an MPNN layer")
    };
    let mut grads = Vec::new();
    let mut d_input = need_input_grad.then(|| Array2::zeros(z.raw_dim()));
    if let (Some(b), Some(g)) = (&ops.boundary, gamma) {
        let u = b.mul_dense(&z.view())?;
        let h = b.mul_dense(&d_pre.view())?;
        let (dw, du) = mix_backward(&u, g, &h);
        grads.push(dw);
        if let Some(dz) = &mut d_input {
            *dz += &b.tr_mul_dense(&du.view())?;
        }
    }
    if let (Some(b), Some(t)) = (&ops.coboundary, theta) {
        let u = b.tr_mul_dense(&z.view())?;
        let h = b.tr_mul_dense(&d_pre.view())?;
        let (dw, du) = mix_backward(&u, t, &h);
        grads.push(dw);
        if let Some(dz) = &mut d_input {
            *dz += &b.mul_dense(&du.view())?;
        }
    }
    Ok((grads, d_input))
}
