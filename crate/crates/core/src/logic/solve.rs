//! Conjunctive-query satisfaction with negation as failure.
//!
//! Search is depth-first over body literals left to right, trying candidate
//! facts in KB insertion order, and returns at the first complete grounding.

use std::collections::HashSet;

use super::kb::KnowledgeBase;
use super::subst::Substitution;
use super::term::{Atom, Literal, Symbol};

#[derive(Clone, Debug, PartialEq)]
pub struct Satisfaction {
    pub satisfied: bool,
    /// First grounding found, extending the partial substitution.
    pub witness: Option<Substitution>,
}

/// Counters collected during one search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchTrace {
    /// Candidate facts tried against positive literals.
    pub groundings_visited: u64,
    /// Candidate facts tried after a complete grounding had been found.
    pub visited_after_first: u64,
    pub solutions: u64,
}

pub fn satisfy(body: &[Literal], partial: &Substitution, kb: &KnowledgeBase) -> Satisfaction {
    satisfy_visible(body, partial, kb, None)
}

/// Like [`satisfy`], ignoring facts hidden by the KB's temporal filter at `horizon`.
pub fn satisfy_visible(
    body: &[Literal],
    partial: &Substitution,
    kb: &KnowledgeBase,
    horizon: Option<i64>,
) -> Satisfaction {
    satisfy_traced(body, partial, kb, horizon).0
}

pub fn satisfy_traced(
    body: &[Literal],
    partial: &Substitution,
    kb: &KnowledgeBase,
    horizon: Option<i64>,
) -> (Satisfaction, SearchTrace) {
    let schedule = schedule(body, partial);
    let mut solver = Solver {
        kb,
        horizon,
        trace: SearchTrace::default(),
    };
    let mut s = partial.clone();
    let satisfied = solver.search(&schedule, &mut s);
    let witness = satisfied.then_some(s);
    (Satisfaction { satisfied, witness }, solver.trace)
}

/// Positive literals keep their order. A negated literal stays in place when
/// every variable it shares with the positive literals is already bound at
/// that point; otherwise it moves to the end of the body.
fn schedule<'a>(body: &'a [Literal], partial: &Substitution) -> Vec<&'a Literal> {
    let positive_vars: HashSet<&Symbol> = body
        .iter()
        .filter(|l| matches!(l, Literal::Positive(_)))
        .flat_map(|l| l.variables().map(|t| t.name()))
        .collect();
    let mut bound: HashSet<&Symbol> = HashSet::new();
    let mut order = Vec::with_capacity(body.len());
    let mut deferred = Vec::new();
    for lit in body {
        match lit {
            Literal::Positive(a) => {
                order.push(lit);
                bound.extend(a.variables().map(|t| t.name()));
            }
            Literal::Negated(_) => {
                let ready = lit
                    .variables()
                    .all(|v| !positive_vars.contains(v.name()) || bound.contains(v.name()) || partial.is_bound(v));
                if ready {
                    order.push(lit);
                } else {
                    deferred.push(lit);
                }
            }
        }
    }
    order.extend(deferred);
    order
}

struct Solver<'a> {
    kb: &'a KnowledgeBase,
    horizon: Option<i64>,
    trace: SearchTrace,
}

impl Solver<'_> {
    fn search(&mut self, goals: &[&Literal], s: &mut Substitution) -> bool {
        let Some((goal, rest)) = goals.split_first() else {
            self.trace.solutions += 1;
            return true;
        };
        match goal {
            Literal::Positive(atom) => self.positive(atom, rest, s),
            Literal::Negated(conj) => {
                let mark = s.mark();
                let refuted = self.exists(conj, s);
                s.undo(mark);
                !refuted && self.search(rest, s)
            }
        }
    }

    fn positive(&mut self, atom: &Atom, rest: &[&Literal], s: &mut Substitution) -> bool {
        let kb = self.kb;
        for &id in kb.candidates(atom, s) {
            if !kb.visible(id, self.horizon) {
                continue;
            }
            if self.trace.solutions > 0 {
                self.trace.visited_after_first += 1;
            }
            self.trace.groundings_visited += 1;
            let mark = s.mark();
            if s.match_ground(atom, kb.fact(id)) && self.search(rest, s) {
                return true;
            }
            s.undo(mark);
        }
        false
    }

    /// Whether the positive conjunction has any solution under `s`. Runs with
    /// its own counters so refutation attempts do not count as solutions.
    fn exists(&self, conj: &[Atom], s: &mut Substitution) -> bool {
        let goals: Vec<Literal> = conj.iter().cloned().map(Literal::Positive).collect();
        let refs: Vec<&Literal> = goals.iter().collect();
        let mut inner = Solver {
            kb: self.kb,
            horizon: self.horizon,
            trace: SearchTrace::default(),
        };
        inner.search(&refs, s)
    }
}
