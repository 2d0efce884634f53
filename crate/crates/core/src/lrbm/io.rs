//! JSON model documents.
//!
//! ```text
//! { "format": "lrbm-model", "version": 1,
//!   "target": {"name": "collab", "arg_types": ["person", "person"]},
//!   "head": "collab(P0,P1)",
//!   "modes": ["mode: actedin(+person, -movie).", ...],
//!   "psi0": 0.0, "config": {...},
//!   "trees": [{"leaf_count": 2,
//!              "root": {"test": "actedin(P0,M2)",
//!                       "true": {"leaf": [d, c, w, u0, u1]},
//!                       "false": {"leaf": [...]}}}] }
//! ```
//!
//! Floats are written in shortest round-trip form, so loading and saving a
//! model reproduces the document byte for byte. Node ids are not stored;
//! a loaded tree numbers its nodes by splitting in preorder, so it may
//! differ from the saved one in ids while having the same shape.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::boost::{BoostedModel, TrainConfig};
use crate::dataset::{parse_modes, Schema};
use crate::error::{Error, Result};
use crate::rrt::{LeafParams, NodeId, NodeKind, RelationalRegressionTree};
use crate::scalar::Scalar;

pub const MODEL_FORMAT: &str = "lrbm-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct TargetDoc {
    name: String,
    arg_types: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NodeDoc<T> {
    Split {
        test: String,
        #[serde(rename = "true")]
        yes: Box<NodeDoc<T>>,
        #[serde(rename = "false")]
        no: Box<NodeDoc<T>>,
    },
    Leaf {
        leaf: [T; 5],
    },
}

#[derive(Serialize, Deserialize)]
struct TreeDoc<T> {
    leaf_count: usize,
    root: NodeDoc<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
struct ModelDoc<T> {
    format: String,
    version: u32,
    target: TargetDoc,
    head: String,
    modes: Vec<String>,
    psi0: T,
    config: TrainConfig<T>,
    trees: Vec<TreeDoc<T>>,
}

fn node_doc<T: Scalar>(tree: &RelationalRegressionTree<T>, id: NodeId) -> NodeDoc<T> {
    match &tree.node(id).kind {
        NodeKind::Leaf { params } => NodeDoc::Leaf {
            leaf: params.to_array(),
        },
        NodeKind::Internal {
            test,
            true_child,
            false_child,
        } => NodeDoc::Split {
            test: test.to_string(),
            yes: Box::new(node_doc(tree, *true_child)),
            no: Box::new(node_doc(tree, *false_child)),
        },
    }
}

fn tree_doc<T: Scalar>(tree: &RelationalRegressionTree<T>) -> TreeDoc<T> {
    TreeDoc {
        leaf_count: tree.leaf_count(),
        root: node_doc(tree, tree.root()),
    }
}

fn build<T: Scalar>(
    tree: &mut RelationalRegressionTree<T>,
    id: NodeId,
    doc: &NodeDoc<T>,
    schema: &Schema,
) -> Result<()> {
    match doc {
        NodeDoc::Leaf { leaf } => {
            let params = LeafParams::from_array(*leaf);
            if !params.is_finite() {
                return Err(Error::Format(format!("non-finite leaf parameters {leaf:?}")));
            }
            tree.set_leaf_params(id, params)
        }
        NodeDoc::Split { test, yes, no } => {
            let atom = schema
                .atom(test)
                .map_err(|e| Error::Format(format!("test `{test}`: {e}")))?;
            let (t, f) = tree.split_leaf(id, atom, LeafParams::zeros(), LeafParams::zeros())?;
            build(tree, t, yes, schema)?;
            build(tree, f, no, schema)
        }
    }
}

fn tree_from_doc<T: Scalar>(
    doc: &TreeDoc<T>,
    target: &std::sync::Arc<crate::logic::Predicate>,
    schema: &Schema,
) -> Result<RelationalRegressionTree<T>> {
    let mut tree = RelationalRegressionTree::leaf(target, LeafParams::zeros());
    let root = tree.root();
    build(&mut tree, root, &doc.root, schema)?;
    if tree.leaf_count() != doc.leaf_count {
        return Err(Error::Format(format!(
            "tree declares {} leaves but has {}",
            doc.leaf_count,
            tree.leaf_count()
        )));
    }
    Ok(tree)
}

pub fn model_to_json<T: Scalar>(model: &BoostedModel<T>) -> Result<String> {
    let doc = ModelDoc {
        format: MODEL_FORMAT.into(),
        version: MODEL_VERSION,
        target: TargetDoc {
            name: model.target.name().to_string(),
            arg_types: model.target.arg_types().iter().map(ToString::to_string).collect(),
        },
        head: model.head().to_string(),
        modes: model.schema.to_modes_text().lines().map(str::to_string).collect(),
        psi0: model.psi0,
        config: model.config.clone(),
        trees: model.trees.iter().map(tree_doc).collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    Ok(text)
}

pub fn model_from_json<T: Scalar>(text: &str) -> Result<BoostedModel<T>> {
    let doc: ModelDoc<T> = serde_json::from_str(text)?;
    if doc.format != MODEL_FORMAT {
        return Err(Error::Format(format!(
            "expected format `{MODEL_FORMAT}`, got `{}`",
            doc.format
        )));
    }
    if doc.version != MODEL_VERSION {
        return Err(Error::Format(format!("unsupported version {}", doc.version)));
    }
    let schema = parse_modes(&doc.modes.join("\n"))?;
    let target = schema
        .predicate(&doc.target.name)
        .ok_or_else(|| Error::Format(format!("target `{}` has no mode declaration", doc.target.name)))?
        .clone();
    let declared: Vec<&str> = target.arg_types().iter().map(|s| s.as_str()).collect();
    if declared != doc.target.arg_types {
        return Err(Error::Format(format!(
            "target `{}` types {:?} disagree with its mode declaration {:?}",
            doc.target.name, doc.target.arg_types, declared
        )));
    }
    doc.config.validate()?;
    let trees = doc
        .trees
        .iter()
        .map(|t| tree_from_doc(t, &target, &schema))
        .collect::<Result<Vec<_>>>()?;
    let model = BoostedModel {
        target,
        schema,
        psi0: doc.psi0,
        trees,
        config: doc.config,
    };
    if model.head().to_string() != doc.head {
        return Err(Error::Format(format!(
            "head `{}` does not match `{}`",
            doc.head,
            model.head()
        )));
    }
    Ok(model)
}

pub fn save_model<T: Scalar>(model: &BoostedModel<T>, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, model_to_json(model)?)?;
    Ok(())
}

pub fn load_model<T: Scalar>(path: impl AsRef<Path>) -> Result<BoostedModel<T>> {
    model_from_json(&std::fs::read_to_string(path)?)
}
