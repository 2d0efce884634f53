use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use indexmap::{IndexMap, IndexSet};

use super::subst::Substitution;
use super::term::{Atom, Symbol, Term};
use crate::error::{Error, Result};

/// Restricts which facts an example may see: a fact whose timestamp column is
/// not strictly earlier than the example's timestamp column is invisible.
///
/// Predicates without an entry in `fact_columns` are always visible.
#[derive(Clone, Debug, Default)]
pub struct TemporalFilter {
    pub example_column: usize,
    pub fact_columns: HashMap<String, usize>,
}

#[derive(Clone, Debug)]
struct Temporal {
    filter: TemporalFilter,
    fact_time: Vec<Option<i64>>,
}

/// Closed-world store of ground facts.
///
/// Facts keep insertion order; both the per-predicate extension and the
/// `(predicate, position, constant)` index list fact ids in that order.
#[derive(Clone, Debug, Default)]
pub struct KnowledgeBase {
    facts: Vec<Atom>,
    fact_set: HashSet<Atom>,
    by_predicate: HashMap<Symbol, Vec<u32>>,
    by_argument: HashMap<(Symbol, usize, Symbol), Vec<u32>>,
    universe: IndexMap<Symbol, IndexSet<Symbol>>,
    constant_types: HashMap<Symbol, Symbol>,
    temporal: Option<Temporal>,
}

const EMPTY: &[u32] = &[];

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn facts(&self) -> &[Atom] {
        &self.facts
    }

    pub fn fact(&self, id: u32) -> &Atom {
        &self.facts[id as usize]
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.fact_set.contains(atom)
    }

    /// Adds a ground fact. Returns `Ok(false)` for a duplicate.
    pub fn insert(&mut self, atom: Atom) -> Result<bool> {
        self.insert_at(atom, 0)
    }

    pub(crate) fn insert_at(&mut self, atom: Atom, line: usize) -> Result<bool> {
        if !atom.is_ground() {
            return Err(Error::NotGround(atom.to_string()));
        }
        if self.fact_set.contains(&atom) {
            return Ok(false);
        }
        for arg in atom.args() {
            self.register_constant_at(arg, line)?;
        }
        let id = u32::try_from(self.facts.len()).expect("fact count fits in u32");
        let name = atom.name().clone();
        self.by_predicate.entry(name.clone()).or_default().push(id);
        for (pos, arg) in atom.args().iter().enumerate() {
            self.by_argument
                .entry((name.clone(), pos, arg.name().clone()))
                .or_default()
                .push(id);
        }
        if let Some(t) = &mut self.temporal {
            let time = fact_timestamp(&t.filter, &atom)?;
            t.fact_time.push(time);
        }
        self.fact_set.insert(atom.clone());
        self.facts.push(atom);
        Ok(true)
    }

    /// Adds a constant to its type universe without asserting any fact, e.g.
    /// an entity that only occurs in examples.
    pub fn register_constant(&mut self, term: &Term) -> Result<()> {
        self.register_constant_at(term, 0)
    }

    pub(crate) fn register_constant_at(&mut self, term: &Term, line: usize) -> Result<()> {
        if !term.is_constant() {
            return Err(Error::NotGround(term.to_string()));
        }
        match self.constant_types.get(term.name()) {
            Some(ty) if ty != term.type_tag() => {
                return Err(Error::TypeConflict {
                    line,
                    constant: term.name().to_string(),
                    expected: ty.to_string(),
                    found: term.type_tag().to_string(),
                })
            }
            Some(_) => {}
            None => {
                self.constant_types.insert(term.name().clone(), term.type_tag().clone());
                self.universe
                    .entry(term.type_tag().clone())
                    .or_default()
                    .insert(term.name().clone());
            }
        }
        Ok(())
    }

    pub fn register_atom_constants(&mut self, atom: &Atom) -> Result<()> {
        atom.args().iter().try_for_each(|t| self.register_constant(t))
    }

    /// Declares an (initially empty) type universe so it is listed by [`types`](Self::types).
    pub fn declare_type(&mut self, type_tag: &Symbol) {
        self.universe.entry(type_tag.clone()).or_default();
    }

    /// Constants of a type, in first-seen order.
    pub fn universe(&self, type_tag: &str) -> Option<&IndexSet<Symbol>> {
        self.universe.get(type_tag)
    }

    pub fn types(&self) -> impl Iterator<Item = &Symbol> {
        self.universe.keys()
    }

    pub fn constant_type(&self, name: &str) -> Option<&Symbol> {
        self.constant_types.get(name)
    }

    /// Errors if any constant of `atom` is not part of the KB's universe.
    pub fn check_known(&self, atom: &Atom) -> Result<()> {
        for arg in atom.args() {
            if arg.is_variable() {
                continue;
            }
            if self.constant_types.get(arg.name()) != Some(arg.type_tag()) {
                return Err(Error::UnknownConstant {
                    constant: arg.name().to_string(),
                    type_tag: arg.type_tag().to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn facts_of(&self, predicate: &str) -> impl Iterator<Item = &Atom> {
        self.by_predicate
            .get(predicate)
            .map(Vec::as_slice)
            .unwrap_or(EMPTY)
            .iter()
            .map(|&id| &self.facts[id as usize])
    }

    /// Candidate fact ids for `pattern` under `s`: the index of the first
    /// bound argument if any, else the predicate extension.
    pub(crate) fn candidates(&self, pattern: &Atom, s: &Substitution) -> &[u32] {
        let name = pattern.name();
        for (pos, arg) in pattern.args().iter().enumerate() {
            let w = s.walk(arg);
            if w.is_constant() {
                return self
                    .by_argument
                    .get(&(name.clone(), pos, w.name().clone()))
                    .map(Vec::as_slice)
                    .unwrap_or(EMPTY);
            }
        }
        self.by_predicate.get(name).map(Vec::as_slice).unwrap_or(EMPTY)
    }

    /// Attaches a temporal visibility filter; timestamps must be integer constants.
    pub fn with_temporal(mut self, filter: TemporalFilter) -> Result<Self> {
        let fact_time = self
            .facts
            .iter()
            .map(|f| fact_timestamp(&filter, f))
            .collect::<Result<Vec<_>>>()?;
        self.temporal = Some(Temporal { filter, fact_time });
        Ok(self)
    }

    /// Visibility horizon for a query: `Some(t)` hides facts stamped `>= t`.
    pub fn horizon_for(&self, query: &Atom) -> Result<Option<i64>> {
        let Some(t) = &self.temporal else {
            return Ok(None);
        };
        let col = t.filter.example_column;
        let term = query
            .args()
            .get(col)
            .ok_or_else(|| Error::Config(format!("timestamp column {col} out of range for `{query}`")))?;
        parse_time(term).map(Some)
    }

    pub(crate) fn visible(&self, id: u32, horizon: Option<i64>) -> bool {
        match (horizon, &self.temporal) {
            (Some(h), Some(t)) => t.fact_time[id as usize].is_none_or(|ft| ft < h),
            _ => true,
        }
    }

    /// One fact per line in the input grammar; parsing the result yields an
    /// equal KB.
    pub fn to_facts_text(&self) -> String {
        let mut out = String::new();
        for f in &self.facts {
            let _ = writeln!(out, "{f}.");
        }
        out
    }
}

/// Set equality of facts and type universes; insertion order is ignored.
impl PartialEq for KnowledgeBase {
    fn eq(&self, other: &Self) -> bool {
        self.fact_set == other.fact_set && self.constant_types == other.constant_types
    }
}

fn fact_timestamp(filter: &TemporalFilter, atom: &Atom) -> Result<Option<i64>> {
    match filter.fact_columns.get(atom.name().as_str()) {
        None => Ok(None),
        Some(&col) => {
            let term = atom
                .args()
                .get(col)
                .ok_or_else(|| Error::Config(format!("timestamp column {col} out of range for `{atom}`")))?;
            parse_time(term).map(Some)
        }
    }
}

fn parse_time(term: &Term) -> Result<i64> {
    term.name()
        .parse::<i64>()
        .map_err(|_| Error::Config(format!("timestamp `{term}` is not an integer")))
}
