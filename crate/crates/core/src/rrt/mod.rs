//! Relational regression trees: literal tests at internal nodes, leaf
//! parameter vectors at the leaves.

mod candidates;
mod fit;
mod params;
mod tree;

pub use candidates::generate_candidates;
pub use fit::{fit_regression_tree, partition, score_split, RegressionExample, TreeConfig};
pub use params::LeafParams;
pub use tree::{
    bind_query, evaluate_tree, head_for, NodeId, NodeKind, QueryBinding, RelationalRegressionTree, TreeNode, TreePath,
};
