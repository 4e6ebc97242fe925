//! Action scoring with an averaged perceptron over discrete state features.

mod features;
mod perceptron;

pub use features::{extract_features, feature_id, feature_names, word_shape, FeatureVector};
pub use perceptron::{
    action_inventory, score, train, train_with_log, PerceptronModel, TrainingLog,
};
