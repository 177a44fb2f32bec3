//! Losses, Adam, parameter counting and the imputation and classification loops.

pub mod bench;
pub mod classify;
pub mod config;
pub mod impute;
pub mod loss;
pub mod optim;
pub mod params;

pub use bench::{benchmark, ArchTiming, BenchConfig, BenchReport};
pub use classify::{train_classification, ClassificationMetrics, FlowClassifier};
pub use config::{Task, TrainConfig};
pub use impute::{percent_correct, train_imputation, OrderMetrics};
pub use loss::{cross_entropy_loss, l1_loss, within_one_percent};
pub use optim::{adam_step, AdamConfig, AdamState};
pub use params::{adjacency, reference_parameter_count, tap_parameter_count};
