use crate::dataset::{ArgMode, ModeDeclaration, Schema};
use crate::logic::{Atom, Term};

use super::tree::variable_name;

/// Variables usable by a new test: the head's, then those introduced along
/// the chain, in order of first appearance.
fn available_variables<'a>(head: &'a Atom, chain: &[&'a Atom]) -> Vec<&'a Term> {
    let mut vars: Vec<&Term> = Vec::new();
    for t in head.variables().chain(chain.iter().flat_map(|a| a.variables())) {
        if !vars.iter().any(|v| v.name() == t.name()) {
            vars.push(t);
        }
    }
    vars
}

/// Candidate tests for a node whose chain (positive context literals) is
/// `chain`.
///
/// Every mode except the target's is instantiated in declaration order. A
/// `+` slot takes an existing variable of the slot's type; a `-` slot takes
/// an existing variable or a fresh one. At most `max_new_vars` fresh
/// variables appear per literal, each literal shares at least one variable
/// with the head or chain, and literals already in the chain are skipped.
/// Fresh variables are named `{Type initial}{n}` with `n` the number of
/// variables in scope, so names never collide along a path.
pub fn generate_candidates(head: &Atom, chain: &[&Atom], schema: &Schema, max_new_vars: usize) -> Vec<Atom> {
    let vars = available_variables(head, chain);
    let mut out: Vec<Atom> = Vec::new();
    for decl in schema.modes() {
        if decl.predicate.name() == head.name() {
            continue;
        }
        let mut slots: Vec<Term> = Vec::with_capacity(decl.arg_specs.len());
        expand(decl, &vars, max_new_vars, 0, &mut slots, &mut out, chain);
    }
    out
}

fn expand(
    decl: &ModeDeclaration,
    vars: &[&Term],
    max_new_vars: usize,
    fresh: usize,
    slots: &mut Vec<Term>,
    out: &mut Vec<Atom>,
    chain: &[&Atom],
) {
    let pos = slots.len();
    if pos == decl.arg_specs.len() {
        if fresh == slots.len() {
            return;
        }
        let atom = Atom::new(&decl.predicate, slots.clone()).expect("slots follow the declaration");
        if !chain.contains(&&atom) && !out.contains(&atom) {
            out.push(atom);
        }
        return;
    }
    let spec = &decl.arg_specs[pos];
    for v in vars.iter().filter(|v| v.type_tag() == &spec.type_tag) {
        slots.push((*v).clone());
        expand(decl, vars, max_new_vars, fresh, slots, out, chain);
        slots.pop();
    }
    if spec.mode == ArgMode::Output && fresh < max_new_vars {
        let name = variable_name(&spec.type_tag, vars.len() + fresh);
        slots.push(Term::variable(name, spec.type_tag.clone()));
        expand(decl, vars, max_new_vars, fresh + 1, slots, out, chain);
        slots.pop();
    }
}
