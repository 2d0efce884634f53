use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::logic::{
    satisfy_visible, unify, Atom, Clause, KnowledgeBase, Literal, Predicate, Substitution, Symbol, Term,
};
use crate::scalar::Scalar;

use super::LeafParams;

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq)]
pub enum NodeKind<T> {
    Internal {
        test: Atom,
        true_child: NodeId,
        false_child: NodeId,
    },
    Leaf {
        params: LeafParams<T>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TreeNode<T> {
    /// Conjunction that holds for every example reaching this node.
    pub context: Vec<Literal>,
    pub depth: usize,
    pub kind: NodeKind<T>,
}

impl<T> TreeNode<T> {
    pub fn is_leaf(&self) -> bool {
        matches!(self.kind, NodeKind::Leaf { .. })
    }

    /// The positive literals of the context: the tests taken on the true
    /// branch along the path, whose variables later tests may reuse.
    pub fn chain(&self) -> impl Iterator<Item = &Atom> {
        self.context.iter().filter_map(|l| match l {
            Literal::Positive(a) => Some(a),
            Literal::Negated(_) => None,
        })
    }
}

/// A ground query bound to a tree's head.
#[derive(Clone, Debug)]
pub struct QueryBinding {
    pub query: Atom,
    pub subst: Substitution,
    pub horizon: Option<i64>,
}

/// Head atom used by every tree of a target: one variable per argument,
/// named after the argument type and position (`collab(P0,P1)`).
pub fn head_for(target: &Arc<Predicate>) -> Atom {
    let args = target
        .arg_types()
        .iter()
        .enumerate()
        .map(|(i, ty)| Term::variable(variable_name(ty, i), ty.clone()))
        .collect();
    Atom::new(target, args).expect("head matches its own signature")
}

pub(crate) fn variable_name(type_tag: &str, index: usize) -> String {
    let initial = type_tag
        .chars()
        .find(|c| c.is_ascii_alphabetic())
        .map(|c| c.to_ascii_uppercase())
        .unwrap_or('V');
    format!("{initial}{index}")
}

/// Checks that `query` is a known ground instance of `head`'s predicate and
/// unifies the two.
pub fn bind_query(head: &Atom, query: &Atom, kb: &KnowledgeBase) -> Result<QueryBinding> {
    if query.predicate() != head.predicate() {
        return Err(Error::WrongTarget {
            atom: query.to_string(),
            target: head.predicate().to_string(),
        });
    }
    if !query.is_ground() {
        return Err(Error::NotGround(query.to_string()));
    }
    kb.check_known(query)?;
    let subst = unify(head, query, &Substitution::new()).ok_or_else(|| Error::WrongTarget {
        atom: query.to_string(),
        target: head.to_string(),
    })?;
    Ok(QueryBinding {
        query: query.clone(),
        subst,
        horizon: kb.horizon_for(query)?,
    })
}

/// Renames every variable outside the head with a trailing `'`, so the
/// variables of a negated conjunction are local to it.
pub(crate) fn rename_apart(atoms: &[Atom], head: &Atom) -> Vec<Atom> {
    let keep: HashSet<&Symbol> = head.variables().map(Term::name).collect();
    atoms
        .iter()
        .map(|a| {
            a.map_terms(|t| {
                if t.is_variable() && !keep.contains(t.name()) {
                    t.renamed(format!("{}'", t.name()))
                } else {
                    t.clone()
                }
            })
        })
        .collect()
}

/// One root-to-leaf path, read as a clause `context ⇒ head`.
#[derive(Clone, Debug, PartialEq)]
pub struct TreePath<T> {
    pub leaf: NodeId,
    pub clause: Clause,
    pub params: LeafParams<T>,
}

/// A binary tree over literal tests whose leaves carry [`LeafParams`].
///
/// An example reaches the true child of a test iff the node's chain plus the
/// test is satisfiable under the example's head binding. The false child's
/// context records the negation of that whole conjunction, so the path
/// clauses of a tree are mutually exclusive and cover every example.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationalRegressionTree<T> {
    head: Atom,
    nodes: Vec<TreeNode<T>>,
    leaf_count: usize,
}

impl<T: Scalar> RelationalRegressionTree<T> {
    /// A single-leaf tree for `target`.
    pub fn leaf(target: &Arc<Predicate>, params: LeafParams<T>) -> Self {
        RelationalRegressionTree {
            head: head_for(target),
            nodes: vec![TreeNode {
                context: Vec::new(),
                depth: 0,
                kind: NodeKind::Leaf { params },
            }],
            leaf_count: 1,
        }
    }

    pub fn head(&self) -> &Atom {
        &self.head
    }

    pub fn target(&self) -> &Arc<Predicate> {
        self.head.predicate()
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node(&self, id: NodeId) -> &TreeNode<T> {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[TreeNode<T>] {
        &self.nodes
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_count
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    pub fn leaf_params(&self, id: NodeId) -> Option<&LeafParams<T>> {
        match &self.nodes[id].kind {
            NodeKind::Leaf { params } => Some(params),
            NodeKind::Internal { .. } => None,
        }
    }

    pub fn set_leaf_params(&mut self, id: NodeId, params: LeafParams<T>) -> Result<()> {
        match &mut self.nodes[id].kind {
            NodeKind::Leaf { params: p } => {
                *p = params;
                Ok(())
            }
            NodeKind::Internal { .. } => Err(Error::Invariant(format!("node {id} is not a leaf"))),
        }
    }

    /// Turns leaf `id` into a test on `test` and returns the new
    /// `(true_child, false_child)` leaves.
    pub fn split_leaf(
        &mut self,
        id: NodeId,
        test: Atom,
        true_params: LeafParams<T>,
        false_params: LeafParams<T>,
    ) -> Result<(NodeId, NodeId)> {
        if !self.nodes[id].is_leaf() {
            return Err(Error::Invariant(format!("node {id} is already split")));
        }
        if test.predicate() == self.head.predicate() {
            return Err(Error::Config(format!("test `{test}` uses the target predicate")));
        }
        let parent = &self.nodes[id];
        let depth = parent.depth + 1;

        let mut true_context = parent.context.clone();
        true_context.push(Literal::Positive(test.clone()));

        let mut tested: Vec<Atom> = parent.chain().cloned().collect();
        tested.push(test.clone());
        let mut false_context = parent.context.clone();
        false_context.push(Literal::Negated(rename_apart(&tested, &self.head)));

        let t = self.nodes.len();
        self.nodes.push(TreeNode {
            context: true_context,
            depth,
            kind: NodeKind::Leaf { params: true_params },
        });
        self.nodes.push(TreeNode {
            context: false_context,
            depth,
            kind: NodeKind::Leaf { params: false_params },
        });
        self.nodes[id].kind = NodeKind::Internal {
            test,
            true_child: t,
            false_child: t + 1,
        };
        self.leaf_count += 1;
        Ok((t, t + 1))
    }

    /// Leaf ids in depth-first order, true branch first.
    pub fn leaves(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.leaf_count);
        let mut stack = vec![self.root()];
        while let Some(id) = stack.pop() {
            match &self.nodes[id].kind {
                NodeKind::Leaf { .. } => out.push(id),
                NodeKind::Internal {
                    true_child,
                    false_child,
                    ..
                } => {
                    stack.push(*false_child);
                    stack.push(*true_child);
                }
            }
        }
        out
    }

    /// Every root-to-leaf path as a clause, in [`Self::leaves`] order.
    pub fn paths(&self) -> Vec<TreePath<T>> {
        self.leaves()
            .into_iter()
            .map(|leaf| TreePath {
                leaf,
                clause: Clause::new(self.head.clone(), self.nodes[leaf].context.clone()),
                params: *self.leaf_params(leaf).expect("leaves() yields leaves"),
            })
            .collect()
    }

    pub fn bind(&self, query: &Atom, kb: &KnowledgeBase) -> Result<QueryBinding> {
        bind_query(&self.head, query, kb)
    }

    /// Whether the example at `node` takes the true branch of `test`.
    pub fn test_holds(&self, node: NodeId, test: &Atom, binding: &QueryBinding, kb: &KnowledgeBase) -> bool {
        let mut body: Vec<Literal> = self.nodes[node].chain().cloned().map(Literal::Positive).collect();
        body.push(Literal::Positive(test.clone()));
        satisfy_visible(&body, &binding.subst, kb, binding.horizon).satisfied
    }

    /// The leaf a bound example reaches.
    pub fn route(&self, binding: &QueryBinding, kb: &KnowledgeBase) -> NodeId {
        let mut id = self.root();
        loop {
            match &self.nodes[id].kind {
                NodeKind::Leaf { .. } => return id,
                NodeKind::Internal {
                    test,
                    true_child,
                    false_child,
                } => {
                    id = if self.test_holds(id, test, binding, kb) {
                        *true_child
                    } else {
                        *false_child
                    };
                }
            }
        }
    }

    /// Value of the reached leaf for a bound example.
    pub fn evaluate_bound(&self, binding: &QueryBinding, kb: &KnowledgeBase) -> T {
        let leaf = self.route(binding, kb);
        self.leaf_params(leaf).expect("route ends at a leaf").potential()
    }
}

/// Value of the unique leaf `query` reaches.
pub fn evaluate_tree<T: Scalar>(tree: &RelationalRegressionTree<T>, query: &Atom, kb: &KnowledgeBase) -> Result<T> {
    let binding = tree.bind(query, kb)?;
    Ok(tree.evaluate_bound(&binding, kb))
}
