use std::time::{Duration, Instant};

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::TrainConfig;
use super::loss::{l1_loss, within_one_percent};
use super::optim::{adam_step, AdamConfig, AdamState};
use crate::cochain::Cochain;
use crate::complex::{OrderOperators, SimplicialComplex};
use crate::data::mask_features;
use crate::error::{Error, Result};
use crate::nn::{Mode, SimplicialNetwork};

/// Outcome of training one order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderMetrics {
    pub order: usize,
    /// Training loss before each update.
    pub losses: Vec<f64>,
    /// Percentage of hidden entries predicted within ±1%.
    pub accuracy: f64,
    /// Percentage of all entries predicted within ±1%.
    pub accuracy_all: f64,
    /// Same as `accuracy` for the median-filled input itself.
    pub baseline_accuracy: f64,
    pub baseline_accuracy_all: f64,
    /// Wall-clock seconds spent in forward and backward passes.
    pub seconds: f64,
    pub parameters: usize,
    /// Bi-SCNN only: fraction of exactly ±1 binarized inputs per layer at evaluation.
    pub saturation: Vec<f64>,
}

/// Percentage of `pred` entries within ±1% of `truth`, restricted to `select`.
pub fn percent_correct(pred: &Array2<f64>, truth: &Array2<f64>, select: impl Fn(usize) -> bool) -> f64 {
    let mut hit = 0usize;
    let mut total = 0usize;
    for (i, (&p, &t)) in pred.iter().zip(truth).enumerate() {
        if select(i) {
            total += 1;
            hit += within_one_percent(p, t) as usize;
        }
    }
    if total == 0 {
        0.0
    } else {
        100.0 * hit as f64 / total as f64
    }
}

pub(crate) fn step_params(net: &mut SimplicialNetwork, grads: &[Array2<f64>], adam: &mut AdamState) -> Result<()> {
    let views = grads.iter().map(|g| g.view().into_dyn()).collect::<Vec<_>>();
    adam_step(
        net.parameters_mut().into_iter().map(|p| p.view_mut().into_dyn()).collect(),
        &views,
        adam,
    )
}

fn train_order(complex: &SimplicialComplex, x: &Cochain, config: &TrainConfig, repeat: usize) -> Result<OrderMetrics> {
    let k = x.order;
    let ops = OrderOperators::new(complex, k)?;
    x.expect_rows(ops.size())?;
    let seed = config.derived_seed(repeat, k);
    let (filled, mask) = mask_features(x, config.missing_rate, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6e65_7477_6f72_6b00);
    let mut net = SimplicialNetwork::new(config.network_spec(x.cols(), x.cols()), &ops, &mut rng)?;
    let mut adam = AdamState::new(AdamConfig::with_lr(config.lr));

    let mut losses = Vec::with_capacity(config.iterations);
    let mut elapsed = Duration::ZERO;
    for it in 0..config.iterations {
        let start = Instant::now();
        let tape = net.forward(&ops, &filled.values, Mode::Train)?;
        let fwd = start.elapsed();
        let (loss, grad) = l1_loss(&tape.output, &x.values, &mask.known)?;
        if !loss.is_finite() {
            return Err(Error::InvalidConfig(format!("loss became {loss} at iteration {it}")));
        }
        let start = Instant::now();
        let grads = net.backward(&ops, &tape, &grad)?;
        elapsed += fwd + start.elapsed();
        losses.push(loss);
        step_params(&mut net, &grads, &mut adam)?;
    }

    let eval = net.forward(&ops, &filled.values, config.eval_mode)?;
    let known: Vec<bool> = mask.known.iter().copied().collect();
    Ok(OrderMetrics {
        order: k,
        losses,
        accuracy: percent_correct(&eval.output, &x.values, |i| !known[i]),
        accuracy_all: percent_correct(&eval.output, &x.values, |_| true),
        baseline_accuracy: percent_correct(&filled.values, &x.values, |i| !known[i]),
        baseline_accuracy_all: percent_correct(&filled.values, &x.values, |_| true),
        seconds: elapsed.as_secs_f64(),
        parameters: net.count_parameters(),
        saturation: eval.saturated_fractions(),
    })
}

/// Trains one independent model per order on features with a random fraction
/// hidden and median-filled, minimizing l1 error on the visible entries.
/// `repeat` selects the seeds for masks and initial weights.
pub fn train_imputation(
    complex: &SimplicialComplex,
    features: &[Cochain],
    config: &TrainConfig,
    repeat: usize,
) -> Result<Vec<OrderMetrics>> {
    config.validate()?;
    let selected: Vec<&Cochain> = match &config.orders {
        Some(orders) => orders
            .iter()
            .map(|&k| {
                features.iter().find(|f| f.order == k).ok_or_else(|| Error::Training {
                    order: k,
                    source: Box::new(Error::InvalidConfig(format!("no features supplied for order {k}"))),
                })
            })
            .collect::<Result<_>>()?,
        None => features.iter().collect(),
    };
    selected
        .into_iter()
        .map(|x| {
            train_order(complex, x, config, repeat).map_err(|e| Error::Training {
                order: x.order,
                source: Box::new(e),
            })
        })
        .collect()
}
