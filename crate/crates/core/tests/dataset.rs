use std::collections::{HashMap, HashSet};

use lrbm::dataset::{generate_negatives, parse_examples, parse_facts, parse_modes, split_folds, ExampleSet};
use lrbm::logic::{satisfy, Atom, Literal, TemporalFilter};
use lrbm::rrt::{bind_query, head_for};
use lrbm::synthetic::{generate, SyntheticConfig};
use lrbm::Error;
use proptest::prelude::*;

#[test]
fn knowledge_base_round_trips_through_text() {
    let d = generate(&SyntheticConfig::default()).unwrap();
    let text = d.facts_text();
    let schema = parse_modes(&d.modes_text()).unwrap();
    assert_eq!(schema, d.schema);
    let kb = parse_facts(&text, &schema).unwrap();
    assert_eq!(kb.len(), d.kb.len());
    assert_eq!(kb.to_facts_text(), text);
    for f in d.kb.facts() {
        assert!(kb.contains(f));
    }
}

#[test]
fn example_files_round_trip() {
    let d = generate(&SyntheticConfig::default()).unwrap();
    let pos = parse_examples(&d.positives_text(), &d.schema, &d.examples.target).unwrap();
    let neg = parse_examples(&d.negatives_text(), &d.schema, &d.examples.target).unwrap();
    assert_eq!(pos, d.examples.positives);
    assert_eq!(neg, d.examples.negatives);
}

#[test]
fn parse_errors_carry_line_numbers() {
    let schema = parse_modes("mode: likes(+person, -food).\nmode: food(+food).\n").unwrap();
    let err = parse_facts("likes(ann, pie).\n\nfood(ann).\n", &schema).unwrap_err();
    assert!(matches!(err, Error::TypeConflict { line: 3, .. }), "{err}");
    let err = parse_facts("likes(ann).\n", &schema).unwrap_err();
    assert!(
        err.to_string().contains("line 1") || matches!(err, Error::Arity { .. }),
        "{err}"
    );
    let err = parse_facts("hates(ann, pie).\n", &schema).unwrap_err();
    assert!(err.to_string().contains("hates"), "{err}");
    assert!(parse_facts("likes(ann, pie)\n", &schema).is_err());
    assert!(parse_modes("mode: likes(person, food).\n").is_err());
}

#[test]
fn negatives_are_deterministic_and_closed_world() {
    let d = generate(&SyntheticConfig::default()).unwrap();
    let target = &d.examples.target;
    let positives: Vec<Atom> = d.truth.iter().cloned().collect();
    let a = generate_negatives(&d.kb, target, &positives, 2.0, 9).unwrap();
    let b = generate_negatives(&d.kb, target, &positives, 2.0, 9).unwrap();
    let c = generate_negatives(&d.kb, target, &positives, 2.0, 10).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.atoms, c.atoms);
    assert_eq!(a.requested, 2 * positives.len());
    assert_eq!(a.shortfall(), 0);
    let unique: HashSet<&Atom> = a.atoms.iter().collect();
    assert_eq!(unique.len(), a.atoms.len());
    let pos: HashSet<&Atom> = positives.iter().collect();
    for n in &a.atoms {
        assert!(!pos.contains(n), "{n} is a positive");
        d.kb.check_known(n).unwrap();
    }
}

#[test]
fn negatives_report_shortfall_in_tiny_domains() {
    let schema = parse_modes("mode: knows(+p, +p).\n").unwrap();
    let kb = parse_facts("knows(a, b).\n", &schema).unwrap();
    let target = schema.predicate("knows").unwrap();
    let pos = vec![schema.atom("knows(a, b)").unwrap()];
    let s = generate_negatives(&kb, target, &pos, 10.0, 0).unwrap();
    assert_eq!(s.atoms.len(), 3);
    assert_eq!(s.shortfall(), 7);
    assert!(generate_negatives(&kb, target, &pos, -1.0, 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn folds_are_stratified_partitions(k in 2usize..7, seed in any::<u64>()) {
        let d = generate(&SyntheticConfig { persons: 30, movies: 15, directors: 6, ..SyntheticConfig::default() }).unwrap();
        let folds = split_folds(&d.examples, k, seed).unwrap();
        prop_assert_eq!(folds.assignments.len(), d.examples.len());
        let np = d.examples.positives.len();
        let mut pos_sizes = vec![0usize; k];
        let mut all_sizes = vec![0usize; k];
        for (i, &f) in folds.assignments.iter().enumerate() {
            prop_assert!(f < k);
            all_sizes[f] += 1;
            if i < np {
                pos_sizes[f] += 1;
            }
        }
        for sizes in [&pos_sizes, &all_sizes] {
            let spread = sizes.iter().max().unwrap() - sizes.iter().min().unwrap();
            prop_assert!(spread <= 1, "{:?}", sizes);
        }
        let again = split_folds(&d.examples, k, seed).unwrap();
        prop_assert_eq!(again, folds);
    }
}

#[test]
fn folds_need_enough_examples_per_class() {
    let schema = parse_modes("mode: t(+x).\n").unwrap();
    let target = schema.predicate("t").unwrap().clone();
    let set = ExampleSet::new(
        target,
        vec![schema.atom("t(a)").unwrap()],
        vec![schema.atom("t(b)").unwrap()],
    )
    .unwrap();
    assert!(matches!(split_folds(&set, 2, 0), Err(Error::TooFewExamples { .. })));
    assert!(split_folds(&set, 1, 0).is_err());
}

#[test]
fn example_sets_reject_overlap_and_foreign_atoms() {
    let schema = parse_modes("mode: t(+x).\nmode: u(+x).\n").unwrap();
    let t = schema.predicate("t").unwrap().clone();
    let a = schema.atom("t(a)").unwrap();
    assert!(ExampleSet::new(t.clone(), vec![a.clone()], vec![a.clone()]).is_err());
    assert!(ExampleSet::new(t.clone(), vec![schema.atom("u(a)").unwrap()], vec![]).is_err());
    assert!(ExampleSet::new(t, vec![schema.atom("t(X)").unwrap()], vec![]).is_err());
}

#[test]
fn temporal_filter_hides_later_facts() {
    let schema = parse_modes("mode: cites(+paper, -paper, +year).\nmode: hot(+paper, +year).\n").unwrap();
    let kb = parse_facts("cites(p1, p2, 1999).\ncites(p1, p3, 2005).\n", &schema).unwrap();
    let mut columns = HashMap::new();
    columns.insert("cites".to_string(), 2);
    let mut kb = kb
        .with_temporal(TemporalFilter {
            example_column: 1,
            fact_columns: columns,
        })
        .unwrap();
    kb.register_constant(&lrbm::logic::Term::constant("2000", "year"))
        .unwrap();
    let target = schema.predicate("hot").unwrap();
    let head = head_for(target);
    let query = schema.atom("hot(p1, 2000)").unwrap();
    let b = bind_query(&head, &query, &kb).unwrap();
    assert_eq!(b.horizon, Some(2000));
    let body = [Literal::pos(schema.atom("cites(P0, Q, Z)").unwrap())];
    let s = lrbm::logic::satisfy_visible(&body, &b.subst, &kb, b.horizon);
    assert!(s.satisfied);
    assert_eq!(s.witness.unwrap().get("Q").unwrap().name().as_str(), "p2");
    let later = [Literal::pos(schema.atom("cites(P0, p3, Z)").unwrap())];
    assert!(!lrbm::logic::satisfy_visible(&later, &b.subst, &kb, b.horizon).satisfied);
    assert!(satisfy(&later, &b.subst, &kb).satisfied);
}
