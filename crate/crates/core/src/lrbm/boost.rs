use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cd::{CdConfig, CdMode};
use super::potential::probability_clamped;
use crate::dataset::{ExampleSet, Schema};
use crate::error::{Error, Result};
use crate::logic::{Atom, KnowledgeBase, Predicate};
use crate::rrt::{
    bind_query, fit_regression_tree, head_for, QueryBinding, RegressionExample, RelationalRegressionTree, TreeConfig,
};
use crate::scalar::Scalar;

/// Hyperparameters of the boosting loop. `learning_rate` is the step size
/// of the per-leaf coordinate descent; trees are added without shrinkage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig<T> {
    pub n_trees: usize,
    pub max_leaves: usize,
    pub learning_rate: T,
    pub cd_max_iters: usize,
    pub cd_tolerance: T,
    pub cd_mode: CdMode,
    pub max_new_vars: usize,
    pub beam_width: Option<usize>,
    pub seed: u64,
    pub psi_clamp: T,
    pub psi0: T,
}

impl<T: Scalar> Default for TrainConfig<T> {
    fn default() -> Self {
        TrainConfig {
            n_trees: 20,
            max_leaves: 4,
            learning_rate: T::of(0.05),
            cd_max_iters: 500,
            cd_tolerance: T::of(1e-8),
            cd_mode: CdMode::Batch,
            max_new_vars: 1,
            beam_width: None,
            seed: 0,
            psi_clamp: T::of(T::SATURATION),
            psi0: T::zero(),
        }
    }
}

impl<T: Scalar> TrainConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.max_leaves < 1 {
            return fail(format!("max_leaves must be at least 1, got {}", self.max_leaves));
        }
        if !(self.learning_rate > T::zero() && self.learning_rate.is_finite()) {
            return fail(format!("learning rate must be positive, got {}", self.learning_rate));
        }
        if self.psi_clamp.is_nan() || self.psi_clamp <= T::zero() {
            return fail(format!("psi clamp must be positive, got {}", self.psi_clamp));
        }
        if self.cd_tolerance.is_nan() || self.cd_tolerance < T::zero() {
            return fail(format!(
                "coordinate descent tolerance must be >= 0, got {}",
                self.cd_tolerance
            ));
        }
        if !self.psi0.is_finite() {
            return fail(format!("psi0 must be finite, got {}", self.psi0));
        }
        if self.beam_width == Some(0) {
            return fail("beam width must be at least 1".into());
        }
        Ok(())
    }

    pub fn cd_config(&self) -> CdConfig<T> {
        CdConfig {
            learning_rate: self.learning_rate,
            max_iters: self.cd_max_iters,
            tolerance: self.cd_tolerance,
            mode: self.cd_mode,
        }
    }

    pub fn tree_config(&self) -> TreeConfig<T> {
        TreeConfig {
            max_leaves: self.max_leaves,
            max_depth: None,
            max_new_vars: self.max_new_vars,
            beam_width: self.beam_width,
            cd: self.cd_config(),
        }
    }
}

/// `psi0` plus a sum of regression trees over one target predicate.
#[derive(Clone, Debug, PartialEq)]
pub struct BoostedModel<T> {
    pub target: Arc<Predicate>,
    /// Mode declarations the trees were grown with; needed to read tests
    /// back from a saved model.
    pub schema: Schema,
    pub psi0: T,
    pub trees: Vec<RelationalRegressionTree<T>>,
    pub config: TrainConfig<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Prediction<T> {
    pub probability: T,
    pub psi: T,
    pub per_tree: Vec<T>,
}

/// Per-iteration training statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationSummary<T> {
    /// Zero-based index of the tree just added.
    pub tree: usize,
    pub leaves: usize,
    /// Squared error of the new tree against the gradients it was fit to.
    pub sse: T,
    /// Mean absolute gradient before the tree was added.
    pub mean_abs_gradient: T,
}

impl<T: Scalar> BoostedModel<T> {
    pub fn new(target: Arc<Predicate>, schema: Schema, config: TrainConfig<T>) -> Self {
        BoostedModel {
            target,
            schema,
            psi0: config.psi0,
            trees: Vec::new(),
            config,
        }
    }

    pub fn head(&self) -> Atom {
        head_for(&self.target)
    }

    pub fn bind(&self, query: &Atom, kb: &KnowledgeBase) -> Result<QueryBinding> {
        bind_query(&self.head(), query, kb)
    }

    pub fn probability_of(&self, psi: T) -> T {
        probability_clamped(psi, self.config.psi_clamp)
    }

    pub fn predict(&self, query: &Atom, kb: &KnowledgeBase) -> Result<Prediction<T>> {
        let binding = self.bind(query, kb)?;
        Ok(self.predict_bound(&binding, kb))
    }

    pub fn predict_bound(&self, binding: &QueryBinding, kb: &KnowledgeBase) -> Prediction<T> {
        let per_tree: Vec<T> = self.trees.iter().map(|t| t.evaluate_bound(binding, kb)).collect();
        let psi = per_tree.iter().fold(self.psi0, |acc, &v| acc + v);
        Prediction {
            probability: self.probability_of(psi),
            psi,
            per_tree,
        }
    }

    pub fn potential(&self, query: &Atom, kb: &KnowledgeBase) -> Result<T> {
        Ok(self.predict(query, kb)?.psi)
    }
}

pub fn predict<T: Scalar>(model: &BoostedModel<T>, query: &Atom, kb: &KnowledgeBase) -> Result<Prediction<T>> {
    model.predict(query, kb)
}

/// Pointwise functional gradients `label - P(y = 1 | x)` of the
/// log-likelihood under the current model.
pub fn compute_gradients<T: Scalar>(
    model: &BoostedModel<T>,
    examples: &[(Atom, bool)],
    kb: &KnowledgeBase,
) -> Result<Vec<T>> {
    examples
        .par_iter()
        .map(|(q, label)| {
            let p = model.predict(q, kb)?.probability;
            Ok(gradient(*label, p))
        })
        .collect()
}

fn gradient<T: Scalar>(label: bool, p: T) -> T {
    if label {
        T::one() - p
    } else {
        -p
    }
}

fn labeled_examples(examples: &ExampleSet) -> Result<Vec<(Atom, bool)>> {
    if examples.is_empty() {
        return Err(Error::Config("training needs at least one example".into()));
    }
    Ok(examples.labeled().map(|(a, l)| (a.clone(), l)).collect())
}

pub fn train<T: Scalar>(
    kb: &KnowledgeBase,
    schema: &Schema,
    examples: &ExampleSet,
    config: &TrainConfig<T>,
) -> Result<BoostedModel<T>> {
    train_with(kb, schema, examples, config, |_| {})
}

/// Functional-gradient boosting: each new tree is fit to the gradients of
/// the model formed by all previous trees. `observer` sees one summary per
/// tree.
pub fn train_with<T: Scalar>(
    kb: &KnowledgeBase,
    schema: &Schema,
    examples: &ExampleSet,
    config: &TrainConfig<T>,
    mut observer: impl FnMut(&IterationSummary<T>),
) -> Result<BoostedModel<T>> {
    config.validate()?;
    let labeled = labeled_examples(examples)?;
    let mut model = BoostedModel::new(Arc::clone(&examples.target), schema.clone(), config.clone());
    let head = model.head();
    let bindings = labeled
        .iter()
        .map(|(q, _)| bind_query(&head, q, kb))
        .collect::<Result<Vec<_>>>()?;
    // Running potentials, accumulated in tree order exactly as predict does.
    let mut psi = vec![model.psi0; labeled.len()];
    let tree_config = config.tree_config();
    let n = T::from_usize(labeled.len()).expect("length fits");

    for m in 0..config.n_trees {
        let grads: Vec<T> = labeled
            .iter()
            .zip(&psi)
            .map(|((_, label), &p)| gradient(*label, model.probability_of(p)))
            .collect();
        let mean_abs_gradient = grads.iter().map(|g| g.abs()).sum::<T>() / n;
        let regression: Vec<RegressionExample<T>> = labeled
            .iter()
            .zip(&grads)
            .map(|((q, label), &g)| RegressionExample {
                query: q.clone(),
                label: *label,
                gradient: g,
            })
            .collect();
        let tree = fit_regression_tree(&regression, schema, kb, &tree_config)?;
        let values: Vec<T> = bindings.par_iter().map(|b| tree.evaluate_bound(b, kb)).collect();
        let sse = values.iter().zip(&grads).map(|(&v, &g)| (v - g) * (v - g)).sum();
        for (p, v) in psi.iter_mut().zip(&values) {
            *p = *p + *v;
        }
        let summary = IterationSummary {
            tree: m,
            leaves: tree.leaf_count(),
            sse,
            mean_abs_gradient,
        };
        log::info!(
            "tree {}: {} leaves, SSE {:.6}, mean |gradient| {:.6}",
            m,
            summary.leaves,
            summary.sse,
            summary.mean_abs_gradient
        );
        observer(&summary);
        model.trees.push(tree);
    }
    Ok(model)
}

/// A single deep tree fit once to the gradients of the prior model, without
/// boosting. `max_depth` bounds the tree; leaves are unbounded.
pub fn train_unboosted<T: Scalar>(
    kb: &KnowledgeBase,
    schema: &Schema,
    examples: &ExampleSet,
    config: &TrainConfig<T>,
    max_depth: usize,
) -> Result<BoostedModel<T>> {
    config.validate()?;
    let labeled = labeled_examples(examples)?;
    let mut model = BoostedModel::new(Arc::clone(&examples.target), schema.clone(), config.clone());
    let p0 = model.probability_of(model.psi0);
    let regression: Vec<RegressionExample<T>> = labeled
        .into_iter()
        .map(|(query, label)| RegressionExample {
            query,
            label,
            gradient: gradient(label, p0),
        })
        .collect();
    let tree_config = TreeConfig {
        max_leaves: usize::MAX,
        max_depth: Some(max_depth),
        ..config.tree_config()
    };
    model
        .trees
        .push(fit_regression_tree(&regression, schema, kb, &tree_config)?);
    model.config.n_trees = 1;
    model.config.max_leaves = model.trees[0].leaf_count();
    Ok(model)
}
