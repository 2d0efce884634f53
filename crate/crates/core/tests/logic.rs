mod common;

use common::{brute_satisfiable, holds_under, predicates, random_case, tuples};
use lrbm::logic::{satisfy, unify, Atom, Literal, Substitution, Term};
use proptest::prelude::*;

#[test]
fn satisfy_agrees_with_exhaustive_enumeration() {
    let mut disagreements = Vec::new();
    let mut satisfied = 0;
    for seed in 0..12_000 {
        let case = random_case(seed);
        let got = satisfy(&case.body, &case.partial, &case.kb);
        let expected = brute_satisfiable(&case.body, &case.partial, &case.kb);
        if got.satisfied != expected {
            disagreements.push(seed);
            continue;
        }
        if let Some(w) = &got.witness {
            satisfied += 1;
            for (v, t) in case.partial.iter() {
                assert_eq!(
                    &w.resolve(&Term::variable(v.clone(), t.type_tag().clone())),
                    t,
                    "seed {seed}"
                );
            }
            assert!(
                holds_under(&case.body, w, &case.kb),
                "seed {seed}: witness does not satisfy the body"
            );
        }
    }
    assert!(disagreements.is_empty(), "disagreeing seeds: {disagreements:?}");
    assert!(
        (2_000..10_000).contains(&satisfied),
        "suite is lopsided: {satisfied} satisfied"
    );
}

#[test]
fn unsatisfied_bodies_report_no_witness() {
    for seed in 0..500 {
        let case = random_case(seed);
        let got = satisfy(&case.body, &case.partial, &case.kb);
        assert_eq!(got.satisfied, got.witness.is_some());
    }
}

fn term_strategy(ty: &'static str) -> impl Strategy<Value = Term> {
    let upper = ty.to_uppercase();
    prop_oneof![
        (0..3usize).prop_map(move |i| Term::variable(format!("{upper}{i}"), ty)),
        (0..2usize).prop_map(move |i| Term::constant(format!("{ty}{i}"), ty)),
    ]
}

fn atom_strategy() -> impl Strategy<Value = Atom> {
    let [p, q, _] = predicates();
    prop_oneof![
        (term_strategy("a"), term_strategy("b")).prop_map(move |(x, y)| Atom::new(&p, vec![x, y]).unwrap()),
        (term_strategy("a"), term_strategy("a")).prop_map(move |(x, y)| Atom::new(&q, vec![x, y]).unwrap()),
    ]
}

fn vars_of(a: &Atom, b: &Atom) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    for v in a.variables().chain(b.variables()) {
        if !out.iter().any(|o| o.name() == v.name()) {
            out.push(v.clone());
        }
    }
    out
}

/// Every grounding of `vars` over two constants per type.
fn ground_substitutions(vars: &[Term]) -> Vec<Substitution> {
    tuples(&vec![2; vars.len()])
        .into_iter()
        .map(|t| {
            let mut s = Substitution::new();
            for (v, i) in vars.iter().zip(t) {
                s.bind(
                    v,
                    Term::constant(format!("{}{i}", v.type_tag().as_str()), v.type_tag().clone()),
                );
            }
            s
        })
        .collect()
}

proptest! {
    #[test]
    fn unifier_makes_atoms_identical(a in atom_strategy(), b in atom_strategy()) {
        if let Some(s) = unify(&a, &b, &Substitution::new()) {
            prop_assert_eq!(s.apply(&a), s.apply(&b));
        }
    }

    #[test]
    fn unifier_is_most_general(a in atom_strategy(), b in atom_strategy()) {
        let vars = vars_of(&a, &b);
        let mgu = unify(&a, &b, &Substitution::new());
        for g in ground_substitutions(&vars) {
            if g.apply(&a) != g.apply(&b) {
                continue;
            }
            let s = mgu.as_ref().expect("a ground unifier exists, so unification must succeed");
            // g factors through s: g(s(x)) = g(x) for every variable.
            for v in &vars {
                prop_assert_eq!(g.resolve(&s.resolve(v)), g.resolve(v));
            }
        }
    }

    #[test]
    fn unify_is_symmetric_in_success(a in atom_strategy(), b in atom_strategy()) {
        let ab = unify(&a, &b, &Substitution::new());
        let ba = unify(&b, &a, &Substitution::new());
        prop_assert_eq!(ab.is_some(), ba.is_some());
    }

    #[test]
    fn ground_atoms_unify_iff_equal(x in 0..2usize, y in 0..3usize, u in 0..2usize, w in 0..3usize) {
        let [p, _, _] = predicates();
        let a = Atom::ground(&p, &[&format!("a{x}"), &format!("b{y}")]).unwrap();
        let b = Atom::ground(&p, &[&format!("a{u}"), &format!("b{w}")]).unwrap();
        prop_assert_eq!(unify(&a, &b, &Substitution::new()).is_some(), a == b);
    }
}

#[test]
fn negated_conjunction_shares_local_variables() {
    let case = random_case(7);
    let [p, q, _] = predicates();
    let x = Term::variable("A0", "a");
    let y = Term::variable("B0", "b");
    let z = Term::variable("A1", "a");
    // ¬(p(X,Y) ∧ q(X,Z)) with X free: no X has both a p and a q fact.
    let body = vec![Literal::Negated(vec![
        Atom::new(&p, vec![x.clone(), y]).unwrap(),
        Atom::new(&q, vec![x, z]).unwrap(),
    ])];
    assert_eq!(
        satisfy(&body, &Substitution::new(), &case.kb).satisfied,
        brute_satisfiable(&body, &Substitution::new(), &case.kb)
    );
}
