use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Schema;
use crate::error::{Error, Result};
use crate::logic::{satisfy_visible, Atom, KnowledgeBase, Literal};
use crate::lrbm::{coordinate_descent, CdConfig};
use crate::scalar::Scalar;

use super::candidates::generate_candidates;
use super::tree::{bind_query, head_for, NodeId, QueryBinding, RelationalRegressionTree};
use super::LeafParams;

/// A ground target atom with its label and the value a tree should fit.
///
/// During boosting `gradient` is the pointwise functional gradient
/// `label - P(y = 1)`; distillation stores the ensemble potential there.
#[derive(Clone, Debug, PartialEq)]
pub struct RegressionExample<T> {
    pub query: Atom,
    pub label: bool,
    pub gradient: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeConfig<T> {
    pub max_leaves: usize,
    /// Nodes at this depth are not split further. `None` is unbounded.
    pub max_depth: Option<usize>,
    pub max_new_vars: usize,
    /// Largest number of pending nodes kept for expansion. `None` is unbounded.
    pub beam_width: Option<usize>,
    pub cd: CdConfig<T>,
}

impl<T: Scalar> Default for TreeConfig<T> {
    fn default() -> Self {
        TreeConfig {
            max_leaves: 4,
            max_depth: None,
            max_new_vars: 1,
            beam_width: None,
            cd: CdConfig::default(),
        }
    }
}

/// Sum of squared errors of two fitted leaves against their targets.
pub fn score_split<T: Scalar>(theta_l: &LeafParams<T>, theta_r: &LeafParams<T>, s_l: &[T], s_r: &[T]) -> T {
    sse(theta_l.potential(), s_l) + sse(theta_r.potential(), s_r)
}

fn sse<T: Scalar>(v: T, targets: &[T]) -> T {
    targets.iter().map(|&t| (v - t) * (v - t)).sum()
}

/// Splits example indices by whether `chain ∧ candidate` is satisfiable
/// under each example's head binding: `(true side, false side)`.
pub fn partition(
    chain: &[&Atom],
    candidate: &Atom,
    bindings: &[QueryBinding],
    kb: &KnowledgeBase,
) -> (Vec<usize>, Vec<usize>) {
    let mut body: Vec<Literal> = chain.iter().map(|a| Literal::Positive((*a).clone())).collect();
    body.push(Literal::Positive(candidate.clone()));
    (0..bindings.len()).partition(|&i| satisfy_visible(&body, &bindings[i].subst, kb, bindings[i].horizon).satisfied)
}

struct Split<T> {
    test: Atom,
    left: Vec<usize>,
    right: Vec<usize>,
    theta_l: LeafParams<T>,
    theta_r: LeafParams<T>,
    sse: T,
}

struct Pending<T> {
    node: NodeId,
    members: Vec<usize>,
    sse: T,
    split: Option<Split<T>>,
    seq: usize,
}

impl<T: Scalar> Pending<T> {
    fn reduction(&self) -> Option<T> {
        self.split.as_ref().map(|s| self.sse - s.sse)
    }
}

struct Fitter<'a, T> {
    head: Atom,
    bindings: Vec<QueryBinding>,
    targets: Vec<T>,
    schema: &'a Schema,
    kb: &'a KnowledgeBase,
    config: &'a TreeConfig<T>,
}

impl<T: Scalar> Fitter<'_, T> {
    fn fit_leaf(&self, members: &[usize]) -> (LeafParams<T>, T) {
        let targets: Vec<T> = members.iter().map(|&i| self.targets[i]).collect();
        let theta = coordinate_descent(&targets, LeafParams::zeros(), &self.config.cd);
        let err = sse(theta.potential(), &targets);
        (theta, err)
    }

    fn best_split(&self, tree: &RelationalRegressionTree<T>, node: NodeId, members: &[usize]) -> Option<Split<T>> {
        let n = tree.node(node);
        if members.len() < 2 || self.config.max_depth.is_some_and(|d| n.depth >= d) {
            return None;
        }
        let chain: Vec<&Atom> = n.chain().collect();
        let candidates = generate_candidates(&self.head, &chain, self.schema, self.config.max_new_vars);
        let local: Vec<QueryBinding> = members.iter().map(|&i| self.bindings[i].clone()).collect();
        let scored: Vec<Option<Split<T>>> = candidates
            .into_par_iter()
            .map(|test| {
                let (l, r) = partition(&chain, &test, &local, self.kb);
                if l.is_empty() || r.is_empty() {
                    return None;
                }
                let left: Vec<usize> = l.into_iter().map(|i| members[i]).collect();
                let right: Vec<usize> = r.into_iter().map(|i| members[i]).collect();
                let (theta_l, sse_l) = self.fit_leaf(&left);
                let (theta_r, sse_r) = self.fit_leaf(&right);
                Some(Split {
                    test,
                    left,
                    right,
                    theta_l,
                    theta_r,
                    sse: sse_l + sse_r,
                })
            })
            .collect();
        // Strict comparison keeps the first candidate among equal scores.
        scored
            .into_iter()
            .flatten()
            .fold(None, |best: Option<Split<T>>, s| match best {
                Some(b) if b.sse <= s.sse => Some(b),
                _ => Some(s),
            })
    }
}

/// Grows one tree on `examples` best-first.
///
/// The root is a single leaf fitted to all targets. Each pending leaf holds
/// its best split (lowest SSE among non-degenerate candidates, first one on
/// ties); the pending leaf whose split reduces SSE the most is expanded
/// next, earliest-created first on ties. A split is committed only if it
/// does not increase SSE. Growth stops at `max_leaves` leaves or when no
/// pending leaf can be split.
pub fn fit_regression_tree<T: Scalar>(
    examples: &[RegressionExample<T>],
    schema: &Schema,
    kb: &KnowledgeBase,
    config: &TreeConfig<T>,
) -> Result<RelationalRegressionTree<T>> {
    let first = examples
        .first()
        .ok_or_else(|| Error::Config("cannot fit a tree to zero examples".into()))?;
    if config.max_leaves == 0 {
        return Err(Error::Config("max_leaves must be at least 1".into()));
    }
    let target = first.query.predicate().clone();
    let head = head_for(&target);
    let bindings = examples
        .iter()
        .map(|e| bind_query(&head, &e.query, kb))
        .collect::<Result<Vec<_>>>()?;
    let fitter = Fitter {
        head,
        bindings,
        targets: examples.iter().map(|e| e.gradient).collect(),
        schema,
        kb,
        config,
    };

    let all: Vec<usize> = (0..examples.len()).collect();
    let (root_params, root_sse) = fitter.fit_leaf(&all);
    let mut tree = RelationalRegressionTree::leaf(&target, root_params);
    if config.max_leaves == 1 {
        return Ok(tree);
    }
    let mut seq = 0;
    let mut frontier = vec![Pending {
        node: tree.root(),
        split: fitter.best_split(&tree, tree.root(), &all),
        members: all,
        sse: root_sse,
        seq,
    }];

    while tree.leaf_count() < config.max_leaves {
        let pick = frontier
            .iter()
            .enumerate()
            .filter(|(_, p)| p.reduction().is_some_and(|r| r >= T::zero()))
            .max_by(|(_, a), (_, b)| {
                let (ra, rb) = (a.reduction().unwrap(), b.reduction().unwrap());
                ra.partial_cmp(&rb)
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then(b.seq.cmp(&a.seq))
            })
            .map(|(i, _)| i);
        let Some(i) = pick else { break };
        let pending = frontier.swap_remove(i);
        let split = pending.split.expect("picked nodes have a split");
        let (t, f) = tree.split_leaf(pending.node, split.test, split.theta_l, split.theta_r)?;
        log::debug!(
            "split node {} (n = {}): SSE {} -> {}",
            pending.node,
            pending.members.len(),
            pending.sse,
            split.sse
        );
        if tree.leaf_count() >= config.max_leaves {
            break;
        }
        for (child, members, theta) in [(t, split.left, split.theta_l), (f, split.right, split.theta_r)] {
            seq += 1;
            frontier.push(Pending {
                node: child,
                split: fitter.best_split(&tree, child, &members),
                sse: sse(
                    theta.potential(),
                    &members.iter().map(|&i| fitter.targets[i]).collect::<Vec<_>>(),
                ),
                members,
                seq,
            });
        }
        if let Some(width) = config.beam_width {
            if frontier.len() > width {
                frontier.sort_by(|a, b| {
                    let ra = a.reduction().unwrap_or(T::neg_infinity());
                    let rb = b.reduction().unwrap_or(T::neg_infinity());
                    rb.partial_cmp(&ra)
                        .unwrap_or(std::cmp::Ordering::Equal)
                        .then(a.seq.cmp(&b.seq))
                });
                frontier.truncate(width);
            }
        }
    }
    Ok(tree)
}
