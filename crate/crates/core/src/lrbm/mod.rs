//! The boosted lifted RBM: leaf potentials, probabilities, coordinate
//! descent for leaf parameters, the boosting loop and model documents.

mod boost;
mod cd;
mod io;
mod potential;

pub use boost::{
    compute_gradients, predict, train, train_unboosted, train_with, BoostedModel, IterationSummary, Prediction,
    TrainConfig,
};
pub use cd::{coordinate_descent, coordinate_descent_traced, CdConfig, CdMode, CdOutcome};
pub use io::{load_model, model_from_json, model_to_json, save_model, MODEL_FORMAT, MODEL_VERSION};
pub use potential::{
    leaf_potential, leaf_potential_gradient, log_likelihood, probability, probability_clamped, sigmoid, softplus,
};
