use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nn::{Activation, Architecture, Mode, NetworkSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Impute,
    Classify,
}

/// Everything needed to reproduce one experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub task: Task,
    pub arch: Architecture,
    /// Number of simplicial layers `P`.
    pub layers: usize,
    /// Hidden width of every simplicial layer.
    pub filters: usize,
    pub lower_taps: usize,
    pub upper_taps: usize,
    pub zero_taps: bool,
    pub activation: Activation,
    pub iterations: usize,
    pub lr: f64,
    pub seed: u64,
    /// Fraction of entries hidden per order (imputation).
    pub missing_rate: f64,
    /// Samples per gradient step (classification).
    pub batch_size: usize,
    pub repeats: usize,
    pub keep_first_norm: bool,
    /// Surrogate used when measuring accuracy after training.
    pub eval_mode: Mode,
    /// Orders to train on; `None` means every order that has features.
    pub orders: Option<Vec<usize>>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            task: Task::Impute,
            arch: Architecture::Biscnn,
            layers: 2,
            filters: 30,
            lower_taps: 1,
            upper_taps: 1,
            zero_taps: false,
            activation: Activation::LeakyRelu,
            iterations: 1000,
            lr: 0.001,
            seed: 0,
            missing_rate: 0.1,
            batch_size: 40,
            repeats: 1,
            keep_first_norm: true,
            eval_mode: Mode::Train,
            orders: None,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("layers", self.layers),
            ("filters", self.filters),
            ("iterations", self.iterations),
            ("batch_size", self.batch_size),
            ("repeats", self.repeats),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(Error::InvalidConfig(format!("{name} must be positive")));
        }
        if self.task == Task::Impute && !(self.missing_rate > 0.0 && self.missing_rate < 1.0) {
            return Err(Error::RateOutOfRange(self.missing_rate));
        }
        if !self.lr.is_finite() || self.lr < 0.0 {
            return Err(Error::InvalidConfig(format!("learning rate {} must be finite and non-negative", self.lr)));
        }
        self.network_spec(1, 1).validate()
    }

    /// Network shape for `d_in` input and `d_out` output features.
    pub fn network_spec(&self, d_in: usize, d_out: usize) -> NetworkSpec {
        let mut widths = vec![d_in];
        widths.extend(std::iter::repeat_n(self.filters, self.layers.saturating_sub(1)));
        widths.push(d_out);
        NetworkSpec {
            arch: self.arch,
            widths,
            lower_taps: self.lower_taps,
            upper_taps: self.upper_taps,
            zero_taps: self.zero_taps,
            activation: self.activation,
            keep_first_norm: self.keep_first_norm,
        }
    }

    /// Seed for one (repeat, order) training context.
    pub fn derived_seed(&self, repeat: usize, order: usize) -> u64 {
        self.seed
            .wrapping_add((repeat as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
            .wrapping_add((order as u64 + 1).wrapping_mul(0xD1B5_4A32_D192_ED03))
    }
}
