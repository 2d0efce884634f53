#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use lrbm::dataset::{parse_facts, parse_modes, Schema};
use lrbm::logic::{Atom, KnowledgeBase, Literal, Predicate, Substitution, Term};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random KB over types `a` and `b` with predicates `p(a,b)`, `q(a,a)`
/// and `r(b)`, plus a random body over them.
pub struct Case {
    pub kb: KnowledgeBase,
    pub body: Vec<Literal>,
    pub partial: Substitution,
}

pub fn predicates() -> [Arc<Predicate>; 3] {
    [
        Predicate::new("p", ["a", "b"]),
        Predicate::new("q", ["a", "a"]),
        Predicate::new("r", ["b"]),
    ]
}

fn random_term(rng: &mut ChaCha8Rng, ty: &str, consts: usize) -> Term {
    let upper = ty.to_uppercase();
    if rng.random_bool(0.8) {
        Term::variable(format!("{upper}{}", rng.random_range(0..3)), ty)
    } else {
        Term::constant(format!("{ty}{}", rng.random_range(0..consts)), ty)
    }
}

fn random_atom(rng: &mut ChaCha8Rng, preds: &[Arc<Predicate>], na: usize, nb: usize) -> Atom {
    let p = &preds[rng.random_range(0..preds.len())];
    let args = p
        .arg_types()
        .iter()
        .map(|t| random_term(rng, t.as_str(), if t.as_str() == "a" { na } else { nb }))
        .collect();
    Atom::new(p, args).unwrap()
}

pub fn random_case(seed: u64) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let preds = predicates();
    let na = rng.random_range(1..=6);
    let nb = rng.random_range(1..=6);
    let density = rng.random_range(0.1..0.6);
    let mut kb = KnowledgeBase::new();
    for i in 0..na {
        kb.register_constant(&Term::constant(format!("a{i}"), "a")).unwrap();
    }
    for i in 0..nb {
        kb.register_constant(&Term::constant(format!("b{i}"), "b")).unwrap();
    }
    for p in &preds {
        let sizes: Vec<usize> = p
            .arg_types()
            .iter()
            .map(|t| if t.as_str() == "a" { na } else { nb })
            .collect();
        for tuple in tuples(&sizes) {
            if rng.random_bool(density) {
                let names: Vec<String> = tuple
                    .iter()
                    .zip(p.arg_types())
                    .map(|(i, t)| format!("{}{i}", t.as_str()))
                    .collect();
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                kb.insert(Atom::ground(p, &refs).unwrap()).unwrap();
            }
        }
    }
    let len = rng.random_range(1..=3);
    let body = (0..len)
        .map(|_| {
            if rng.random_bool(0.3) {
                let n = if rng.random_bool(0.3) { 2 } else { 1 };
                Literal::Negated((0..n).map(|_| random_atom(&mut rng, &preds, na, nb)).collect())
            } else {
                Literal::pos(random_atom(&mut rng, &preds, na, nb))
            }
        })
        .collect();
    let mut partial = Substitution::new();
    if rng.random_bool(0.3) {
        let c = rng.random_range(0..na);
        partial.bind(&Term::variable("A0", "a"), Term::constant(format!("a{c}"), "a"));
    }
    Case { kb, body, partial }
}

/// Every tuple in the product `0..sizes[0] × 0..sizes[1] × ...`.
pub fn tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in sizes {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

fn free_vars<'a>(atoms: impl IntoIterator<Item = &'a Atom>, s: &Substitution) -> Vec<Term> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for a in atoms {
        for v in a.variables() {
            if !s.is_bound(v) && seen.insert(v.name().to_string()) {
                out.push(v.clone());
            }
        }
    }
    out
}

/// All extensions of `s` binding `vars` to constants of their types.
fn groundings(vars: &[Term], s: &Substitution, kb: &KnowledgeBase) -> Vec<Substitution> {
    let universes: Vec<Vec<Term>> = vars
        .iter()
        .map(|v| {
            kb.universe(v.type_tag().as_str())
                .map(|u| {
                    u.iter()
                        .map(|c| Term::constant(c.clone(), v.type_tag().clone()))
                        .collect()
                })
                .unwrap_or_default()
        })
        .collect();
    let sizes: Vec<usize> = universes.iter().map(Vec::len).collect();
    tuples(&sizes)
        .into_iter()
        .map(|t| {
            let mut e = s.clone();
            for (i, &k) in t.iter().enumerate() {
                e.bind(&vars[i], universes[i][k].clone());
            }
            e
        })
        .collect()
}

fn all_facts(atoms: &[Atom], s: &Substitution, kb: &KnowledgeBase) -> bool {
    atoms.iter().all(|a| kb.contains(&s.apply(a)))
}

/// Whether a grounded body holds under `s`, which binds every variable of
/// the positive literals. Negations quantify their remaining variables.
pub fn holds_under(body: &[Literal], s: &Substitution, kb: &KnowledgeBase) -> bool {
    body.iter().all(|l| match l {
        Literal::Positive(a) => kb.contains(&s.apply(a)),
        Literal::Negated(conj) => {
            let local = free_vars(conj.iter(), s);
            !groundings(&local, s, kb).iter().any(|g| all_facts(conj, g, kb))
        }
    })
}

/// Exhaustive enumeration over the positive literals' variables.
pub fn brute_satisfiable(body: &[Literal], partial: &Substitution, kb: &KnowledgeBase) -> bool {
    let positives = body.iter().filter_map(|l| match l {
        Literal::Positive(a) => Some(a),
        Literal::Negated(_) => None,
    });
    let outer = free_vars(positives, partial);
    groundings(&outer, partial, kb).iter().any(|g| holds_under(body, g, kb))
}

pub const MOVIE_MODES: &str = "\
mode: collab(+person, +person).
mode: directedby(-movie, -person).
mode: actedin(-person, -movie).
mode: ingenre(+movie, -genre).
mode: samegenre(+genre, +genre).
mode: sameperson(-person, -person).
";

pub fn movie_schema() -> Schema {
    parse_modes(MOVIE_MODES).unwrap()
}

pub fn movie_kb(facts: &str) -> KnowledgeBase {
    parse_facts(facts, &movie_schema()).unwrap()
}

/// The three rule clauses of the movie domain, as `(head, body)` text.
pub fn movie_rules(schema: &Schema) -> Vec<lrbm::logic::Clause> {
    let head = schema.atom("collab(P1,P2)").unwrap();
    let lit = |t: &str| match t.trim().strip_prefix('!') {
        Some(rest) => Literal::neg(schema.atom(rest).unwrap()),
        None => Literal::pos(schema.atom(t.trim()).unwrap()),
    };
    [
        "directedby(M1,P1); ingenre(M1,G1); actedin(P2,M2); ingenre(M2,G2); !samegenre(G1,G2)",
        "directedby(M1,P1); actedin(P3,M1); sameperson(P3,P2)",
        "actedin(P1,M); actedin(P2,M)",
    ]
    .iter()
    .map(|b| lrbm::logic::Clause::new(head.clone(), b.split(';').map(lit).collect()))
    .collect()
}
