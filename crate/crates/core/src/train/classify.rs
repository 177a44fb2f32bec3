use std::time::{Duration, Instant};

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::TrainConfig;
use super::loss::cross_entropy_loss;
use super::optim::{adam_step, AdamConfig, AdamState};
use crate::complex::{OrderOperators, SimplicialComplex};
use crate::data::TrajectoryDataset;
use crate::error::{Error, Result};
use crate::nn::{Mode, ReadoutHead, SimplicialNetwork, HIDDEN_WIDTH};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationMetrics {
    pub losses: Vec<f64>,
    pub train_accuracy: f64,
    /// Percentage of held-out samples classified correctly.
    pub test_accuracy: f64,
    pub seconds: f64,
    /// Simplicial layers plus readout.
    pub parameters: usize,
}

/// A simplicial network on edge flows followed by the pooled readout head.
pub struct FlowClassifier {
    pub network: SimplicialNetwork,
    pub head: ReadoutHead,
}

impl FlowClassifier {
    pub fn predict(&self, ops: &OrderOperators, samples: &[Array2<f64>], mode: Mode) -> Result<Vec<usize>> {
        let outputs = samples
            .iter()
            .map(|x| self.network.forward(ops, x, mode).map(|t| t.output))
            .collect::<Result<Vec<_>>>()?;
        let probs = self.head.forward(&outputs)?.probabilities;
        Ok(probs
            .outer_iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |best, (i, &p)| if p > best.1 { (i, p) } else { best })
                    .0
            })
            .collect())
    }
}

fn accuracy(pred: &[usize], labels: &[usize]) -> f64 {
    if pred.is_empty() {
        return 0.0;
    }
    100.0 * pred.iter().zip(labels).filter(|(p, l)| p == l).count() as f64 / pred.len() as f64
}

/// One gradient step on a batch; returns the loss and the time spent in
/// forward and backward passes.
fn train_batch(
    model: &mut FlowClassifier,
    ops: &OrderOperators,
    samples: &[Array2<f64>],
    labels: &[usize],
    adam: &mut AdamState,
) -> Result<(f64, Duration)> {
    let start = Instant::now();
    let tapes = samples
        .iter()
        .map(|x| model.network.forward(ops, x, Mode::Train))
        .collect::<Result<Vec<_>>>()?;
    let outputs: Vec<Array2<f64>> = tapes.iter().map(|t| t.output.clone()).collect();
    let readout = model.head.forward(&outputs)?;
    let fwd = start.elapsed();
    let (loss, d_logits) = cross_entropy_loss(&readout.probabilities, labels)?;
    let start = Instant::now();
    let (head_grads, d_outputs) = model.head.backward(&readout, &d_logits);
    let mut grads: Option<Vec<Array2<f64>>> = None;
    for (tape, d) in tapes.iter().zip(&d_outputs) {
        let g = model.network.backward(ops, tape, d)?;
        match &mut grads {
            Some(acc) => acc.iter_mut().zip(&g).for_each(|(a, b)| *a += b),
            None => grads = Some(g),
        }
    }
    let elapsed = fwd + start.elapsed();
    let grads = grads.unwrap_or_default();

    // one Adam state over network weights followed by the head
    let mut params: Vec<_> = model.network.parameters_mut().into_iter().map(|p| p.view_mut().into_dyn()).collect();
    params.push(model.head.w1.view_mut().into_dyn());
    params.push(model.head.b1.view_mut().into_dyn());
    params.push(model.head.w2.view_mut().into_dyn());
    params.push(model.head.b2.view_mut().into_dyn());
    let mut views: Vec<_> = grads.iter().map(|g| g.view().into_dyn()).collect();
    views.push(head_grads.w1.view().into_dyn());
    views.push(head_grads.b1.view().into_dyn());
    views.push(head_grads.w2.view().into_dyn());
    views.push(head_grads.b2.view().into_dyn());
    adam_step(params, &views, adam)?;
    Ok((loss, elapsed))
}

/// Trains simplicial layers on order-1 flows plus the readout head with
/// cross-entropy, `batch_size` trajectories per step, and reports accuracy on
/// the held-out split.
pub fn train_classification(
    complex: &SimplicialComplex,
    data: &TrajectoryDataset,
    config: &TrainConfig,
    repeat: usize,
) -> Result<ClassificationMetrics> {
    config.validate()?;
    let wrap = |e: Error| Error::Training {
        order: 1,
        source: Box::new(e),
    };
    let ops = OrderOperators::new(complex, 1).map_err(wrap)?;
    if data.edges() != ops.size() {
        return Err(wrap(Error::dims(format!(
            "flows have {} entries, complex has {} edges",
            data.edges(),
            ops.size()
        ))));
    }
    if data.train.is_empty() {
        return Err(Error::InvalidConfig("training split is empty".into()));
    }
    let classes = data.classes().max(2);
    let seed = config.derived_seed(repeat, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spec = config.network_spec(1, config.filters);
    spec.widths = std::iter::once(1).chain(std::iter::repeat_n(config.filters, config.layers)).collect();
    let network = SimplicialNetwork::new(spec, &ops, &mut rng).map_err(wrap)?;
    let head = ReadoutHead::new(config.filters, HIDDEN_WIDTH, classes, config.activation, &mut rng);
    let mut model = FlowClassifier { network, head };
    let mut adam = AdamState::new(AdamConfig::with_lr(config.lr));

    let samples: Vec<Array2<f64>> = (0..data.len()).map(|i| data.sample(i)).collect();
    let mut order = data.train.clone();
    let mut cursor = order.len();
    let batch = config.batch_size.min(order.len());
    let mut losses = Vec::with_capacity(config.iterations);
    let mut elapsed = Duration::ZERO;
    for _ in 0..config.iterations {
        let mut idx = Vec::with_capacity(batch);
        while idx.len() < batch {
            if cursor == order.len() {
                order.shuffle(&mut rng);
                cursor = 0;
            }
            idx.push(order[cursor]);
            cursor += 1;
        }
        let xs: Vec<Array2<f64>> = idx.iter().map(|&i| samples[i].clone()).collect();
        let ys: Vec<usize> = idx.iter().map(|&i| data.labels[i]).collect();
        let (loss, dt) = train_batch(&mut model, &ops, &xs, &ys, &mut adam).map_err(wrap)?;
        losses.push(loss);
        elapsed += dt;
    }

    let eval = |split: &[usize]| -> Result<f64> {
        let xs: Vec<Array2<f64>> = split.iter().map(|&i| samples[i].clone()).collect();
        let ys: Vec<usize> = split.iter().map(|&i| data.labels[i]).collect();
        if xs.is_empty() {
            return Ok(0.0);
        }
        Ok(accuracy(&model.predict(&ops, &xs, config.eval_mode)?, &ys))
    };
    Ok(ClassificationMetrics {
        losses,
        train_accuracy: eval(&data.train).map_err(wrap)?,
        test_accuracy: eval(&data.test).map_err(wrap)?,
        seconds: elapsed.as_secs_f64(),
        parameters: model.network.count_parameters() + model.head.count_parameters(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::synth_trajectories;
    use crate::nn::{Activation, Architecture};

    #[test]
    fn short_run_learns_and_is_deterministic() {
        let (mesh, data) = synth_trajectories(3, 40, 20).unwrap();
        let cfg = TrainConfig {
            task: super::super::config::Task::Classify,
            arch: Architecture::Scnn,
            activation: Activation::Tanh,
            filters: 8,
            iterations: 60,
            lr: 0.01,
            batch_size: 20,
            ..Default::default()
        };
        let a = train_classification(&mesh, &data, &cfg, 0).unwrap();
        let b = train_classification(&mesh, &data, &cfg, 0).unwrap();
        assert_eq!(a.losses, b.losses);
        assert_eq!(a.test_accuracy, b.test_accuracy);
        assert!(a.losses.last().unwrap() < a.losses.first().unwrap());
        assert!((0.0..=100.0).contains(&a.test_accuracy));
    }
}
