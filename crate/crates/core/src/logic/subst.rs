use std::fmt;

use super::term::{Atom, Symbol, Term};

/// Variable bindings, kept in binding order.
///
/// Bindings may point at other variables; [`Substitution::resolve`] follows
/// chains, so applying a substitution is idempotent.
#[derive(Clone, Default)]
pub struct Substitution {
    bindings: Vec<(Symbol, Term)>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &Term)> {
        self.bindings.iter().map(|(v, t)| (v, t))
    }

    /// Direct binding of a variable name, without following chains.
    pub fn get(&self, var: &str) -> Option<&Term> {
        self.bindings.iter().find(|(v, _)| &**v == var).map(|(_, t)| t)
    }

    /// Binds `var` to `value`. Fails if `var` is not a variable, is already
    /// bound, or the types disagree.
    pub fn bind(&mut self, var: &Term, value: Term) -> bool {
        if !var.is_variable() || var.type_tag() != value.type_tag() || self.get(var.name()).is_some() {
            return false;
        }
        if value.is_variable() && value.name() == var.name() {
            return true;
        }
        self.bindings.push((var.name().clone(), value));
        true
    }

    /// Follows variable chains until reaching a constant or an unbound variable.
    pub fn walk<'a>(&'a self, mut term: &'a Term) -> &'a Term {
        while term.is_variable() {
            match self.get(term.name()) {
                Some(next) => term = next,
                None => break,
            }
        }
        term
    }

    pub fn resolve(&self, term: &Term) -> Term {
        self.walk(term).clone()
    }

    pub fn is_bound(&self, var: &Term) -> bool {
        self.walk(var).is_constant()
    }

    pub fn apply(&self, atom: &Atom) -> Atom {
        atom.map_terms(|t| self.resolve(t))
    }

    pub(crate) fn mark(&self) -> usize {
        self.bindings.len()
    }

    pub(crate) fn undo(&mut self, mark: usize) {
        self.bindings.truncate(mark);
    }

    /// Binds the variables of `pattern` so that it equals the ground `fact`.
    /// On failure the substitution may hold partial bindings; callers undo to
    /// a mark.
    pub(crate) fn match_ground(&mut self, pattern: &Atom, fact: &Atom) -> bool {
        if pattern.predicate() != fact.predicate() {
            return false;
        }
        for (p, c) in pattern.args().iter().zip(fact.args()) {
            let w = self.walk(p);
            if w.is_constant() {
                if w != c {
                    return false;
                }
            } else {
                let w = w.clone();
                if !self.bind(&w, c.clone()) {
                    return false;
                }
            }
        }
        true
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Term, Term)>) -> Self {
        let mut s = Substitution::new();
        for (var, value) in pairs {
            assert!(s.bind(&var, value), "invalid binding for {var:?}");
        }
        s
    }

    fn resolved_pairs(&self) -> Vec<(Symbol, Term)> {
        let mut pairs: Vec<(Symbol, Term)> = self
            .bindings
            .iter()
            .map(|(v, t)| (v.clone(), self.resolve(t)))
            .collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        pairs
    }
}

/// Substitutions compare by the fully resolved value of each bound variable,
/// independent of binding order.
impl PartialEq for Substitution {
    fn eq(&self, other: &Self) -> bool {
        self.resolved_pairs() == other.resolved_pairs()
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}/{}", self.resolve(t))?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Most general unifier of `a` and `b` extending `seed`, or `None` when the
/// predicates, constants or types clash.
pub fn unify(a: &Atom, b: &Atom, seed: &Substitution) -> Option<Substitution> {
    if a.predicate() != b.predicate() {
        return None;
    }
    let mut s = seed.clone();
    for (x, y) in a.args().iter().zip(b.args()) {
        let x = s.resolve(x);
        let y = s.resolve(y);
        if x == y {
            continue;
        }
        let ok = if x.is_variable() {
            s.bind(&x, y)
        } else if y.is_variable() {
            s.bind(&y, x)
        } else {
            false
        };
        if !ok {
            return None;
        }
    }
    Some(s)
}

pub fn apply(s: &Substitution, atom: &Atom) -> Atom {
    s.apply(atom)
}
