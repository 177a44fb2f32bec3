//! File formats, feature masking and synthetic datasets.

pub mod format;
pub mod mask;
pub mod synth;

pub use format::{
    complex_to_json, features_to_json, load_complex, load_features, load_trajectories, parse_complex, parse_features,
    parse_trajectories, save_complex, save_features, save_trajectories, TrajectoryDataset, SCHEMA_VERSION,
};
pub use mask::{mask_features, median, Mask};
pub use synth::{
    fig1_complex, punctured_mesh, random_flag_complex, synth_citation_like, synth_trajectories,
    synth_trajectories_with_noise, Scale,
};
