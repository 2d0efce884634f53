use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logic::{satisfy_visible, Atom, Clause, KnowledgeBase, Literal, Predicate, Substitution};
use crate::lrbm::{probability_clamped, BoostedModel};
use crate::rrt::{bind_query, LeafParams};
use crate::scalar::Scalar;

pub type HiddenId = usize;

/// Where a hidden node came from in a path-mapped network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSource {
    pub tree: usize,
    /// Index into the tree's paths, in depth-first leaf order.
    pub path: usize,
}

/// A clause-valued hidden unit. It is active for a query iff its body is
/// satisfiable under the query's binding of the clause head.
#[derive(Clone, Debug, PartialEq)]
pub struct HiddenNode<T> {
    pub clause: Clause,
    pub params: LeafParams<T>,
    pub source: Option<PathSource>,
}

/// A lifted RBM with clause-valued hidden units.
///
/// Visible units are the predicates that occur in some hidden clause body;
/// a visible unit and a hidden unit are connected iff the predicate occurs
/// in that body. Every hidden unit connects to both output units through
/// its `u1` and `u0` weights.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedRbmNetwork<T> {
    pub target: Arc<Predicate>,
    pub visible: Vec<Arc<Predicate>>,
    pub hidden: Vec<HiddenNode<T>>,
    /// `(visible index, hidden id)` pairs, grouped by hidden id.
    pub edges: Vec<(usize, HiddenId)>,
    pub psi0: T,
    pub psi_clamp: T,
}

impl<T: Scalar> LiftedRbmNetwork<T> {
    pub fn new(target: Arc<Predicate>, hidden: Vec<HiddenNode<T>>, psi0: T) -> Result<Self> {
        for h in &hidden {
            if h.clause.head.predicate() != &target {
                return Err(Error::WrongTarget {
                    atom: h.clause.head.to_string(),
                    target: target.to_string(),
                });
            }
        }
        let mut visible: Vec<Arc<Predicate>> = Vec::new();
        let mut edges = Vec::new();
        for (id, h) in hidden.iter().enumerate() {
            for p in h.clause.body_predicates() {
                let v = match visible.iter().position(|q| q == &p) {
                    Some(v) => v,
                    None => {
                        visible.push(p);
                        visible.len() - 1
                    }
                };
                edges.push((v, id));
            }
        }
        Ok(LiftedRbmNetwork {
            target,
            visible,
            hidden,
            edges,
            psi0,
            psi_clamp: T::of(T::SATURATION),
        })
    }

    /// Hidden units built directly from clauses and parameters.
    pub fn from_clauses(
        target: Arc<Predicate>,
        clauses: impl IntoIterator<Item = (Clause, LeafParams<T>)>,
        psi0: T,
    ) -> Result<Self> {
        let hidden = clauses
            .into_iter()
            .map(|(clause, params)| HiddenNode {
                clause,
                params,
                source: None,
            })
            .collect();
        Self::new(target, hidden, psi0)
    }

    pub fn visible_of(&self, hidden: HiddenId) -> impl Iterator<Item = &Arc<Predicate>> {
        self.edges
            .iter()
            .filter(move |(_, h)| *h == hidden)
            .map(|(v, _)| &self.visible[*v])
    }
}

/// One hidden unit per root-to-leaf path of every tree, carrying the leaf's
/// parameters. For any query exactly one unit per tree is active, so the
/// network potential equals the ensemble potential.
pub fn paths_to_lrbm<T: Scalar>(model: &BoostedModel<T>) -> Result<LiftedRbmNetwork<T>> {
    let mut hidden = Vec::new();
    for (t, tree) in model.trees.iter().enumerate() {
        for (p, path) in tree.paths().into_iter().enumerate() {
            hidden.push(HiddenNode {
                clause: path.clause,
                params: path.params,
                source: Some(PathSource { tree: t, path: p }),
            });
        }
    }
    let mut net = LiftedRbmNetwork::new(Arc::clone(&model.target), hidden, model.psi0)?;
    net.psi_clamp = model.config.psi_clamp;
    Ok(net)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Inference<T> {
    pub probability: T,
    pub psi: T,
    /// Active hidden units in id order.
    pub activated: Vec<HiddenId>,
    /// First satisfying grounding of each active unit, aligned with `activated`.
    pub witnesses: Vec<Substitution>,
    /// Ground facts matched by the positive body literals under each witness.
    pub groundings: Vec<Vec<Atom>>,
}

/// Unifies the query with every hidden clause head and searches for the
/// first grounding of the body. The potential is `psi0` plus the leaf
/// potentials of the active units.
pub fn lrbm_inference<T: Scalar>(net: &LiftedRbmNetwork<T>, query: &Atom, kb: &KnowledgeBase) -> Result<Inference<T>> {
    let results = net
        .hidden
        .par_iter()
        .map(|h| {
            let binding = bind_query(&h.clause.head, query, kb)?;
            Ok(satisfy_visible(&h.clause.body, &binding.subst, kb, binding.horizon).witness)
        })
        .collect::<Result<Vec<Option<Substitution>>>>()?;
    let mut psi = net.psi0;
    let mut out = Inference {
        probability: T::zero(),
        psi,
        activated: Vec::new(),
        witnesses: Vec::new(),
        groundings: Vec::new(),
    };
    for (id, witness) in results.into_iter().enumerate() {
        let Some(w) = witness else { continue };
        let h = &net.hidden[id];
        psi = psi + h.params.potential();
        out.groundings.push(
            h.clause
                .body
                .iter()
                .filter_map(|l| match l {
                    Literal::Positive(a) => Some(w.apply(a)),
                    Literal::Negated(_) => None,
                })
                .collect(),
        );
        out.activated.push(id);
        out.witnesses.push(w);
    }
    out.psi = psi;
    out.probability = probability_clamped(psi, net.psi_clamp);
    Ok(out)
}
