use std::borrow::Borrow;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Cheaply clonable interned-by-reference string used for names and types.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(s: &str) -> Self {
        Symbol(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Deref for Symbol {
    type Target = str;
    fn deref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for Symbol {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

impl From<String> for Symbol {
    fn from(s: String) -> Self {
        Symbol(Arc::from(s))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermKind {
    Constant,
    Variable,
}

/// A typed constant or variable. Two terms are equal only if kind, name and
/// type all agree, so `p1:person` and `p1:movie` never unify.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Term {
    kind: TermKind,
    name: Symbol,
    type_tag: Symbol,
}

impl Term {
    pub fn constant(name: impl Into<Symbol>, type_tag: impl Into<Symbol>) -> Self {
        Term {
            kind: TermKind::Constant,
            name: name.into(),
            type_tag: type_tag.into(),
        }
    }

    pub fn variable(name: impl Into<Symbol>, type_tag: impl Into<Symbol>) -> Self {
        Term {
            kind: TermKind::Variable,
            name: name.into(),
            type_tag: type_tag.into(),
        }
    }

    pub fn kind(&self) -> TermKind {
        self.kind
    }

    pub fn name(&self) -> &Symbol {
        &self.name
    }

    pub fn type_tag(&self) -> &Symbol {
        &self.type_tag
    }

    pub fn is_variable(&self) -> bool {
        self.kind == TermKind::Variable
    }

    pub fn is_constant(&self) -> bool {
        self.kind == TermKind::Constant
    }

    /// Same term under a different name (kind and type kept).
    pub fn renamed(&self, name: impl Into<Symbol>) -> Self {
        Term {
            kind: self.kind,
            name: name.into(),
            type_tag: self.type_tag.clone(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.type_tag)
    }
}

/// Predicate signature: a name plus one declared type per argument.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Predicate {
    name: Symbol,
    arg_types: Vec<Symbol>,
}

impl Predicate {
    pub fn new(name: impl Into<Symbol>, arg_types: impl IntoIterator<Item = impl Into<Symbol>>) -> Arc<Self> {
        Arc::new(Predicate {
            name: name.into(),
            arg_types: arg_types.into_iter().map(Into::into).collect(),
        })
    }

    pub fn name(&self) -> &Symbol {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arg_types.len()
    }

    pub fn arg_types(&self) -> &[Symbol] {
        &self.arg_types
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    predicate: Arc<Predicate>,
    args: Vec<Term>,
}

impl Atom {
    /// Builds an atom, rejecting arity or argument-type mismatches.
    pub fn new(predicate: &Arc<Predicate>, args: Vec<Term>) -> Result<Self> {
        if args.len() != predicate.arity() {
            return Err(Error::Arity {
                predicate: predicate.name.to_string(),
                expected: predicate.arity(),
                found: args.len(),
            });
        }
        for (position, (arg, ty)) in args.iter().zip(&predicate.arg_types).enumerate() {
            if arg.type_tag() != ty {
                return Err(Error::ArgumentType {
                    predicate: predicate.name.to_string(),
                    position,
                    expected: ty.to_string(),
                    found: arg.type_tag().to_string(),
                });
            }
        }
        Ok(Atom {
            predicate: Arc::clone(predicate),
            args,
        })
    }

    /// Convenience constructor: ground atom from constant names.
    pub fn ground(predicate: &Arc<Predicate>, constants: &[&str]) -> Result<Self> {
        if constants.len() != predicate.arity() {
            return Err(Error::Arity {
                predicate: predicate.name.to_string(),
                expected: predicate.arity(),
                found: constants.len(),
            });
        }
        let args = constants
            .iter()
            .zip(predicate.arg_types())
            .map(|(c, ty)| Term::constant(*c, ty.clone()))
            .collect();
        Atom::new(predicate, args)
    }

    pub(crate) fn from_parts_unchecked(predicate: Arc<Predicate>, args: Vec<Term>) -> Self {
        debug_assert_eq!(predicate.arity(), args.len());
        Atom { predicate, args }
    }

    pub fn predicate(&self) -> &Arc<Predicate> {
        &self.predicate
    }

    pub fn name(&self) -> &Symbol {
        &self.predicate.name
    }

    pub fn args(&self) -> &[Term] {
        &self.args
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_constant)
    }

    pub fn variables(&self) -> impl Iterator<Item = &Term> {
        self.args.iter().filter(|t| t.is_variable())
    }

    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> Atom {
        Atom {
            predicate: Arc::clone(&self.predicate),
            args: self.args.iter().map(&mut f).collect(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.predicate.name)?;
        if self.args.is_empty() {
            return Ok(());
        }
        f.write_str("(")?;
        for (i, arg) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{arg}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negated,
}

/// A body element of a clause.
///
/// `Negated` holds a conjunction and succeeds iff the conjunction has no
/// solution extending the current bindings (negation as failure). A plain
/// negated literal is the one-atom case. Variables of a negated conjunction
/// that occur in no positive literal of the same body are local to it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Literal {
    Positive(Atom),
    Negated(Vec<Atom>),
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal::Positive(atom)
    }

    pub fn neg(atom: Atom) -> Self {
        Literal::Negated(vec![atom])
    }

    pub fn sign(&self) -> Sign {
        match self {
            Literal::Positive(_) => Sign::Positive,
            Literal::Negated(_) => Sign::Negated,
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        match self {
            Literal::Positive(a) => std::slice::from_ref(a),
            Literal::Negated(atoms) => atoms,
        }
    }

    pub fn variables(&self) -> impl Iterator<Item = &Term> {
        self.atoms().iter().flat_map(Atom::variables)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Positive(a) => write!(f, "{a}"),
            Literal::Negated(atoms) if atoms.len() == 1 => write!(f, "¬{}", atoms[0]),
            Literal::Negated(atoms) => {
                f.write_str("¬(")?;
                write_conjunction(f, atoms)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn write_conjunction<D: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[D]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(" ∧ ")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

/// A conjunctive body implying a target head.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pub head: Atom,
    pub body: Vec<Literal>,
}

impl Clause {
    pub fn new(head: Atom, body: Vec<Literal>) -> Self {
        Clause { head, body }
    }

    /// Predicates mentioned anywhere in the body, in first-appearance order.
    pub fn body_predicates(&self) -> Vec<Arc<Predicate>> {
        let mut out: Vec<Arc<Predicate>> = Vec::new();
        for atom in self.body.iter().flat_map(Literal::atoms) {
            if !out.iter().any(|p| p == atom.predicate()) {
                out.push(Arc::clone(atom.predicate()));
            }
        }
        out
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.body.is_empty() {
            f.write_str("true")?;
        } else {
            write_conjunction(f, &self.body)?;
        }
        write!(f, " ⇒ {}", self.head)
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
