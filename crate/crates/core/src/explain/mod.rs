//! Turning a boosted model into an explicit lifted RBM, either exactly (one
//! hidden unit per tree path) or approximately (one distilled tree).

mod distill;
mod export;
mod network;

pub use distill::{distill_single_tree, DistilledTree, DEFAULT_DISTILL_DEPTH};
pub use export::{
    export, influence_order, network_to_dot, network_to_json, network_to_text, ExportFormat, NETWORK_FORMAT,
};
pub use network::{lrbm_inference, paths_to_lrbm, HiddenId, HiddenNode, Inference, LiftedRbmNetwork, PathSource};
