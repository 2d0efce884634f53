//! Boosted lifted restricted Boltzmann machines over relational data.
//!
//! The learner grows relational regression trees by functional-gradient
//! boosting; every root-to-leaf path of every tree becomes a clause-valued
//! hidden unit of an explainable lifted RBM. Numeric code is generic over
//! [`Scalar`] (`f32` or `f64`); the aliases below fix `f64`, with `*32`
//! variants for `f32`.

pub mod dataset;
pub mod error;
pub mod eval;
pub mod explain;
pub mod logic;
pub mod lrbm;
pub mod rrt;
pub mod scalar;
pub mod synthetic;

pub use dataset::{ExampleSet, Schema};
pub use error::{Error, Result};
pub use eval::{cross_validate, cross_validate_with};
pub use explain::{distill_single_tree, lrbm_inference, paths_to_lrbm};
pub use logic::{Atom, Clause, KnowledgeBase, Literal};
pub use lrbm::{predict, train};
pub use scalar::Scalar;

pub type Model = lrbm::BoostedModel<f64>;
pub type Model32 = lrbm::BoostedModel<f32>;
pub type Config = lrbm::TrainConfig<f64>;
pub type Config32 = lrbm::TrainConfig<f32>;
pub type Tree = rrt::RelationalRegressionTree<f64>;
pub type Tree32 = rrt::RelationalRegressionTree<f32>;
pub type Params = rrt::LeafParams<f64>;
pub type Params32 = rrt::LeafParams<f32>;
pub type Network = explain::LiftedRbmNetwork<f64>;
pub type Network32 = explain::LiftedRbmNetwork<f32>;
