use rayon::prelude::*;

use crate::dataset::ExampleSet;
use crate::error::{Error, Result};
use crate::logic::KnowledgeBase;
use crate::lrbm::{BoostedModel, TrainConfig};
use crate::rrt::{fit_regression_tree, RegressionExample, RelationalRegressionTree, TreeConfig};
use crate::scalar::Scalar;

pub const DEFAULT_DISTILL_DEPTH: usize = 10;

/// One tree fit to an ensemble's potentials.
#[derive(Clone, Debug, PartialEq)]
pub struct DistilledTree<T> {
    pub tree: RelationalRegressionTree<T>,
    pub max_depth: usize,
    /// The ensemble potential of each training example, in
    /// [`ExampleSet::labeled`] order.
    pub targets: Vec<T>,
}

impl<T: Scalar> DistilledTree<T> {
    /// The distilled tree as a one-tree model. Its leaves predict the full
    /// potential, so `psi0` is zero.
    pub fn to_model(&self, source: &BoostedModel<T>) -> BoostedModel<T> {
        BoostedModel {
            target: source.target.clone(),
            schema: source.schema.clone(),
            psi0: T::zero(),
            trees: vec![self.tree.clone()],
            config: TrainConfig {
                n_trees: 1,
                max_leaves: self.tree.leaf_count(),
                psi0: T::zero(),
                ..source.config.clone()
            },
        }
    }
}

/// Relabels every training example with the ensemble potential and fits a
/// single tree of depth at most `max_depth` to those values. Leaves are
/// refit by coordinate descent; growth is otherwise unbounded, so the tree
/// overfits the ensemble by design. The result approximates the ensemble
/// but is not exact.
pub fn distill_single_tree<T: Scalar>(
    model: &BoostedModel<T>,
    examples: &ExampleSet,
    kb: &KnowledgeBase,
    max_depth: usize,
) -> Result<DistilledTree<T>> {
    if examples.is_empty() {
        return Err(Error::Config("distillation needs training examples".into()));
    }
    let regression = examples
        .labeled()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(q, label)| {
            Ok(RegressionExample {
                query: q.clone(),
                label,
                gradient: model.potential(q, kb)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let config = TreeConfig {
        max_leaves: usize::MAX,
        max_depth: Some(max_depth),
        ..model.config.tree_config()
    };
    let tree = fit_regression_tree(&regression, &model.schema, kb, &config)?;
    Ok(DistilledTree {
        tree,
        max_depth,
        targets: regression.into_iter().map(|r| r.gradient).collect(),
    })
}
