//! Simplicial neural network layers and trainable stacks.

pub mod activation;
pub mod binarize;
pub mod conv;
pub mod kernels;
pub mod layers;
pub mod network;
pub mod readout;

pub use activation::Activation;
pub use binarize::{binarize_features, feature_normalize, hard_tanh, scale_rows, sign_fn, surrogate, BiOutputs, Mode};
pub use conv::{mpnn_pre_activation, tap_backward, tap_forward, LayerInput, MpnnParams, Operator, Tap};
pub use kernels::SignMatrix;
pub use layers::{biscnn_layer_forward, biscnn_network_forward, mpnn_forward, scnn_forward, snn_forward, LayerParams};
pub use network::{Architecture, LayerRecord, LayerWeights, NetworkSpec, SimplicialNetwork, Tape};
pub use readout::{softmax, ReadoutGrads, ReadoutHead, ReadoutTape, HIDDEN_WIDTH};
