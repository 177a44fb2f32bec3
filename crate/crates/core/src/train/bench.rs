//! Forward plus backward timing across architectures on identical data.

use std::time::{Duration, Instant};

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::loss::l1_loss;
use super::params::{adjacency, reference_parameter_count};
use crate::cochain::Cochain;
use crate::complex::{OrderOperators, SimplicialComplex};
use crate::error::{Error, Result};
use crate::nn::{Activation, Architecture, Mode, NetworkSpec, SimplicialNetwork};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    pub archs: Vec<Architecture>,
    pub layers: usize,
    pub filters: usize,
    pub activation: Activation,
    /// Timed iterations per order.
    pub iterations: usize,
    /// Untimed iterations run first per order.
    pub warmup: usize,
    pub seed: u64,
    /// Surrogate for the Bi-SCNN forward pass.
    pub mode: Mode,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            archs: vec![Architecture::Biscnn, Architecture::Scnn],
            layers: 2,
            filters: 30,
            activation: Activation::LeakyRelu,
            iterations: 20,
            warmup: 1,
            seed: 0,
            mode: Mode::Train,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        let mut distinct = self.archs.clone();
        distinct.sort_by_key(|a| a.name());
        distinct.dedup();
        if distinct.len() < 2 {
            return Err(Error::InvalidConfig("benchmark needs at least two distinct architectures".into()));
        }
        if self.layers == 0 || self.filters == 0 || self.iterations == 0 {
            return Err(Error::InvalidConfig("layers, filters and iterations must be positive".into()));
        }
        Ok(())
    }

    fn spec(&self, arch: Architecture, d: usize) -> NetworkSpec {
        let mut widths = vec![d];
        widths.extend(std::iter::repeat_n(self.filters, self.layers - 1));
        widths.push(d);
        let mut spec = NetworkSpec::new(arch, widths, self.activation);
        // baselines carry the j = 0 taps of their reference implementations
        spec.zero_taps = matches!(arch, Architecture::Snn | Architecture::Scnn);
        spec
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArchTiming {
    pub arch: Architecture,
    /// Forward plus backward seconds summed over orders and timed iterations.
    pub seconds: f64,
    pub seconds_per_iteration: f64,
    pub parameters: usize,
    /// Count under the published table's convention, when it exists.
    pub reference_parameters: Option<usize>,
    /// Per order, per binarized layer: fraction of layer inputs that are exactly ±1.
    pub saturation: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub timings: Vec<ArchTiming>,
    /// Bi-SCNN seconds over SCNN seconds, when both were measured.
    pub biscnn_over_scnn: Option<f64>,
}

fn time_order(net: &SimplicialNetwork, ops: &OrderOperators, x: &Cochain, cfg: &BenchConfig) -> Result<(Duration, Vec<f64>)> {
    let known = Array2::from_elem(x.values.raw_dim(), true);
    let mut elapsed = Duration::ZERO;
    let mut saturation = Vec::new();
    for it in 0..cfg.warmup + cfg.iterations {
        let start = Instant::now();
        let tape = net.forward(ops, &x.values, cfg.mode)?;
        let fwd = start.elapsed();
        let (_, grad) = l1_loss(&tape.output, &x.values, &known)?;
        let start = Instant::now();
        std::hint::black_box(net.backward(ops, &tape, &grad)?);
        if it >= cfg.warmup {
            elapsed += fwd + start.elapsed();
        }
        saturation = tape.saturated_fractions();
    }
    Ok((elapsed, saturation))
}

/// Times every architecture on every order of `features`, with weights drawn
/// from the same seed for each.
pub fn benchmark(complex: &SimplicialComplex, features: &[Cochain], cfg: &BenchConfig) -> Result<BenchReport> {
    cfg.validate()?;
    let ops: Vec<OrderOperators> = features
        .iter()
        .map(|x| OrderOperators::new(complex, x.order))
        .collect::<Result<_>>()?;
    let adj = adjacency(complex);
    let mut timings = Vec::new();
    for &arch in &cfg.archs {
        let mut total = Duration::ZERO;
        let mut parameters = 0;
        let mut saturation = Vec::new();
        for (x, op) in features.iter().zip(&ops) {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ x.order as u64);
            let net = SimplicialNetwork::new(cfg.spec(arch, x.cols()), op, &mut rng).map_err(|e| Error::Training {
                order: x.order,
                source: Box::new(e),
            })?;
            let (dt, sat) = time_order(&net, op, x, cfg).map_err(|e| Error::Training {
                order: x.order,
                source: Box::new(e),
            })?;
            total += dt;
            parameters += net.count_parameters();
            saturation.push(sat);
        }
        let widths = cfg.spec(arch, features.first().map_or(1, |x| x.cols())).widths;
        let orders: Vec<(bool, bool)> = features.iter().map(|x| adj[x.order]).collect();
        timings.push(ArchTiming {
            arch,
            seconds: total.as_secs_f64(),
            seconds_per_iteration: total.as_secs_f64() / cfg.iterations as f64,
            parameters,
            reference_parameters: reference_parameter_count(arch, &widths, &orders),
            saturation,
        });
    }
    let find = |a: Architecture| timings.iter().find(|t| t.arch == a).map(|t| t.seconds);
    let biscnn_over_scnn = match (find(Architecture::Biscnn), find(Architecture::Scnn)) {
        (Some(b), Some(s)) if s > 0.0 => Some(b / s),
        _ => None,
    };
    Ok(BenchReport { timings, biscnn_over_scnn })
}
