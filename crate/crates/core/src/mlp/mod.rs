//! Oracle-labeled training data and a small feedforward network that
//! predicts the optimal selection from a candidate table.

mod dataset;
mod network;

pub use dataset::{
    read_dataset, synthesize_dataset, synthesize_from_history, write_dataset, TrainingRow, NUM_COLUMNS,
    NUM_FEATURES,
};
pub use network::{sample_individuals, train, train_with, MlpModel, TrainConfig};
