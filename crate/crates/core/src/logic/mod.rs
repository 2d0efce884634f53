//! Typed first-order terms, unification and conjunctive-query satisfaction
//! against a closed-world fact store.

mod kb;
mod solve;
mod subst;
mod term;

pub use kb::{KnowledgeBase, TemporalFilter};
pub use solve::{satisfy, satisfy_traced, satisfy_visible, Satisfaction, SearchTrace};
pub use subst::{apply, unify, Substitution};
pub use term::{Atom, Clause, Literal, Predicate, Sign, Symbol, Term, TermKind};
