//! Loading relational data: mode declarations, facts and labelled examples,
//! plus negative sampling and stratified cross-validation folds.

mod folds;
mod negatives;
mod parse;

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

pub use folds::{split_folds, FoldSpec};
pub use negatives::{generate_negatives, generate_negatives_with, NegativeSample, NegativeSampler, UniformSampler};
pub use parse::{extend_facts, parse_examples, parse_facts, parse_modes};

pub(crate) use parse::atom_from_text;

use crate::error::{Error, Result};
use crate::logic::{Atom, KnowledgeBase, Predicate, Symbol};

/// `+` arguments must reuse a variable already bound on the path; `-`
/// arguments may reuse one or introduce a fresh variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArgMode {
    Input,
    Output,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArgSpec {
    pub type_tag: Symbol,
    pub mode: ArgMode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeDeclaration {
    pub predicate: Arc<Predicate>,
    pub arg_specs: Vec<ArgSpec>,
}

/// The predicate vocabulary of a domain: one mode declaration per predicate,
/// in declaration order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Schema {
    modes: Vec<ModeDeclaration>,
    index: HashMap<Symbol, usize>,
}

impl Schema {
    pub fn new(modes: impl IntoIterator<Item = ModeDeclaration>) -> Result<Self> {
        let mut schema = Schema::default();
        for m in modes {
            schema.add(m).map_err(Error::Config)?;
        }
        Ok(schema)
    }

    pub(crate) fn add(&mut self, decl: ModeDeclaration) -> Result<(), String> {
        let name = decl.predicate.name().clone();
        if self.index.contains_key(&name) {
            return Err(format!("duplicate mode declaration for `{name}`"));
        }
        self.index.insert(name, self.modes.len());
        self.modes.push(decl);
        Ok(())
    }

    pub fn modes(&self) -> &[ModeDeclaration] {
        &self.modes
    }

    pub fn get(&self, name: &str) -> Option<&ModeDeclaration> {
        self.index.get(name).map(|&i| &self.modes[i])
    }

    pub fn predicate(&self, name: &str) -> Option<&Arc<Predicate>> {
        self.get(name).map(|m| &m.predicate)
    }

    /// Parses an atom in the fact grammar (without the trailing period);
    /// uppercase arguments become variables.
    pub fn atom(&self, text: &str) -> Result<Atom> {
        atom_from_text(text, |n| self.predicate(n).cloned()).map_err(|message| Error::Parse { line: 0, message })
    }

    /// Renders the schema back into the modes-file grammar.
    pub fn to_modes_text(&self) -> String {
        let mut out = String::new();
        for m in &self.modes {
            let args: Vec<String> = m
                .arg_specs
                .iter()
                .map(|s| {
                    let sign = match s.mode {
                        ArgMode::Input => '+',
                        ArgMode::Output => '-',
                    };
                    format!("{sign}{}", s.type_tag)
                })
                .collect();
            out.push_str(&format!("mode: {}({}).\n", m.predicate.name(), args.join(", ")));
        }
        out
    }
}

/// Labelled ground examples of one target predicate.
#[derive(Clone, Debug)]
pub struct ExampleSet {
    pub target: Arc<Predicate>,
    pub positives: Vec<Atom>,
    pub negatives: Vec<Atom>,
}

impl ExampleSet {
    pub fn new(target: Arc<Predicate>, positives: Vec<Atom>, negatives: Vec<Atom>) -> Result<Self> {
        for atom in positives.iter().chain(&negatives) {
            if atom.predicate() != &target {
                return Err(Error::WrongTarget {
                    atom: atom.to_string(),
                    target: target.to_string(),
                });
            }
            if !atom.is_ground() {
                return Err(Error::NotGround(atom.to_string()));
            }
        }
        let pos: HashSet<&Atom> = positives.iter().collect();
        if let Some(both) = negatives.iter().find(|a| pos.contains(a)) {
            return Err(Error::Config(format!(
                "`{both}` is both a positive and a negative example"
            )));
        }
        Ok(ExampleSet {
            target,
            positives,
            negatives,
        })
    }

    pub fn len(&self) -> usize {
        self.positives.len() + self.negatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Positives first, then negatives. Fold assignments index this order.
    pub fn labeled(&self) -> impl Iterator<Item = (&Atom, bool)> {
        self.positives
            .iter()
            .map(|a| (a, true))
            .chain(self.negatives.iter().map(|a| (a, false)))
    }

    /// Sub-set by indices into [`labeled`](Self::labeled) order.
    pub fn select(&self, indices: &[usize]) -> ExampleSet {
        let np = self.positives.len();
        let mut positives = Vec::new();
        let mut negatives = Vec::new();
        for &i in indices {
            if i < np {
                positives.push(self.positives[i].clone());
            } else {
                negatives.push(self.negatives[i - np].clone());
            }
        }
        ExampleSet {
            target: Arc::clone(&self.target),
            positives,
            negatives,
        }
    }

    /// Adds every example constant to the KB's type universes.
    pub fn register_constants(&self, kb: &mut KnowledgeBase) -> Result<()> {
        self.positives
            .iter()
            .chain(&self.negatives)
            .try_for_each(|a| kb.register_atom_constants(a))
    }
}
