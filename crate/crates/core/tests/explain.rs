mod common;

use std::collections::BTreeSet;

use common::{movie_kb, movie_rules, movie_schema};
use lrbm::explain::{
    distill_single_tree, export, influence_order, lrbm_inference, network_to_json, paths_to_lrbm, ExportFormat,
    LiftedRbmNetwork,
};
use lrbm::logic::satisfy_traced;
use lrbm::lrbm::{train, BoostedModel, TrainConfig};
use lrbm::rrt::{bind_query, LeafParams};
use lrbm::synthetic::{generate, SyntheticConfig, SyntheticData};

fn domain() -> SyntheticData {
    generate(&SyntheticConfig::default()).unwrap()
}

fn trained(d: &SyntheticData, n_trees: usize) -> BoostedModel<f64> {
    let config = TrainConfig {
        n_trees,
        ..TrainConfig::default()
    };
    train(&d.kb, &d.schema, &d.examples, &config).unwrap()
}

#[test]
fn path_mapped_network_reproduces_the_ensemble() {
    let d = domain();
    assert!(d.examples.len() >= 500);
    let model = trained(&d, 10);
    let net = paths_to_lrbm(&model).unwrap();
    let leaves: usize = model.trees.iter().map(|t| t.leaf_count()).sum();
    assert_eq!(net.hidden.len(), leaves);
    for (q, _) in d.examples.labeled() {
        let ensemble = model.predict(q, &d.kb).unwrap();
        let inferred = lrbm_inference(&net, q, &d.kb).unwrap();
        assert!((ensemble.psi - inferred.psi).abs() < 1e-9, "{q}");
        assert!((ensemble.probability - inferred.probability).abs() < 1e-12);
        // Exactly one path per tree fires.
        let per_tree: Vec<usize> = inferred
            .activated
            .iter()
            .map(|&h| net.hidden[h].source.unwrap().tree)
            .collect();
        assert_eq!(per_tree, (0..model.trees.len()).collect::<Vec<_>>(), "{q}");
    }
}

#[test]
fn edges_match_clause_bodies() {
    let d = domain();
    let net = paths_to_lrbm(&trained(&d, 5)).unwrap();
    for (id, h) in net.hidden.iter().enumerate() {
        let from_edges: BTreeSet<String> = net.visible_of(id).map(|p| p.to_string()).collect();
        let from_body: BTreeSet<String> = h
            .clause
            .body
            .iter()
            .flat_map(|l| l.atoms().iter().map(|a| a.predicate().to_string()))
            .collect();
        assert_eq!(from_edges, from_body, "h{id}");
    }
    let unique: BTreeSet<_> = net.edges.iter().collect();
    assert_eq!(unique.len(), net.edges.len(), "duplicate edges");
    assert!(net
        .edges
        .iter()
        .all(|&(v, h)| v < net.visible.len() && h < net.hidden.len()));
}

fn rule_network() -> LiftedRbmNetwork<f64> {
    let schema = movie_schema();
    let params = [
        LeafParams::from_array([-1.0, 0.0, 0.0, 1.0, -1.0]),
        LeafParams::from_array([1.0, 0.0, 0.0, -1.0, 1.0]),
        LeafParams::from_array([3.0, 0.0, 0.0, -1.0, 1.0]),
    ];
    let target = schema.predicate("collab").unwrap().clone();
    LiftedRbmNetwork::from_clauses(target, movie_rules(&schema).into_iter().zip(params), 0.0).unwrap()
}

fn binding_of(witness: &lrbm::logic::Substitution, var: &str) -> String {
    witness.get(var).map(|t| t.name().to_string()).unwrap_or_default()
}

#[test]
fn first_worked_example_activates_only_the_coacting_rule() {
    let kb = movie_kb("actedin(p1, m1).\nactedin(p1, m2).\nactedin(p2, m1).\nactedin(p2, m2).\n");
    let schema = movie_schema();
    let net = rule_network();
    let query = schema.atom("collab(p1, p2)").unwrap();
    let out = lrbm_inference(&net, &query, &kb).unwrap();
    assert_eq!(out.activated, vec![2]);
    let w = &out.witnesses[0];
    assert_eq!(binding_of(w, "M"), "m1");
    assert_eq!(binding_of(w, "P1"), "p1");
    assert_eq!(binding_of(w, "P2"), "p2");
    let facts: Vec<String> = out.groundings[0].iter().map(ToString::to_string).collect();
    assert_eq!(facts, ["actedin(p1,m1)", "actedin(p2,m1)"]);
    let expected_psi = net.hidden[2].params.potential();
    assert!((out.psi - expected_psi).abs() < 1e-15);

    let h3 = &net.hidden[2].clause;
    let b = bind_query(&h3.head, &query, &kb).unwrap();
    let (sat, trace) = satisfy_traced(&h3.body, &b.subst, &kb, None);
    assert!(sat.satisfied);
    assert_eq!(trace.solutions, 1);
    assert_eq!(trace.visited_after_first, 0);
}

#[test]
fn second_worked_example_activates_only_the_alias_rule() {
    let kb = movie_kb(
        "directedby(m1, p1).\ningenre(m1, g1).\nactedin(p2, m2).\ningenre(m2, g2).\n\
         directedby(m01, p01).\nactedin(p03, m01).\nsameperson(p03, p02).\n",
    );
    let schema = movie_schema();
    let net = rule_network();
    let query = schema.atom("collab(p01, p02)").unwrap();
    let out = lrbm_inference(&net, &query, &kb).unwrap();
    assert_eq!(out.activated, vec![1]);
    let w = &out.witnesses[0];
    for (var, value) in [("P1", "p01"), ("M1", "m01"), ("P2", "p02"), ("P3", "p03")] {
        assert_eq!(binding_of(w, var), value, "{var}");
    }
    assert_eq!(w.len(), 4, "the grounding binds exactly the clause variables");
    assert!(w.iter().all(|(_, t)| t.is_constant()));
    let facts: Vec<String> = out.groundings[0].iter().map(ToString::to_string).collect();
    assert_eq!(
        facts,
        ["directedby(m01,p01)", "actedin(p03,m01)", "sameperson(p03,p02)"]
    );

    for (id, h) in net.hidden.iter().enumerate() {
        let b = bind_query(&h.clause.head, &query, &kb).unwrap();
        let (sat, trace) = satisfy_traced(&h.clause.body, &b.subst, &kb, None);
        assert_eq!(sat.satisfied, id == 1);
        assert_eq!(trace.visited_after_first, 0);
    }
}

#[test]
fn negated_rule_fires_when_genres_differ() {
    let kb =
        movie_kb("directedby(m1, p1).\ningenre(m1, g1).\nactedin(p2, m2).\ningenre(m2, g2).\nsamegenre(g1, g1).\n");
    let query = movie_schema().atom("collab(p1, p2)").unwrap();
    let out = lrbm_inference(&rule_network(), &query, &kb).unwrap();
    assert_eq!(out.activated, vec![0]);
    // Negated literals contribute no activated facts.
    assert_eq!(out.groundings[0].len(), 4);
    assert_eq!(binding_of(&out.witnesses[0], "G2"), "g2");
}

#[test]
fn network_exports_are_consistent() {
    let net = rule_network();
    let dot = export(&net, ExportFormat::Dot).unwrap();
    assert!(dot.starts_with("digraph lrbm {"));
    assert_eq!(dot.matches("[dir=none]").count(), net.edges.len());
    let text = export(&net, ExportFormat::Text).unwrap();
    assert_eq!(text.lines().count(), 2 + net.hidden.len());
    let order = influence_order(&net);
    let gaps: Vec<f64> = order
        .iter()
        .map(|&i| (net.hidden[i].params.u1 - net.hidden[i].params.u0).abs())
        .collect();
    assert!(gaps.windows(2).all(|w| w[0] >= w[1]));
    let json: serde_json::Value = serde_json::from_str(&network_to_json(&net).unwrap()).unwrap();
    assert_eq!(json["format"], "lrbm-network");
    assert_eq!(json["hidden"].as_array().unwrap().len(), 3);
    assert_eq!(json["visible"].as_array().unwrap().len(), net.visible.len());
}

#[test]
fn single_tree_distills_to_itself() {
    let d = domain();
    let model = trained(&d, 1);
    let depth = model.trees[0].depth().max(1);
    let distilled = distill_single_tree(&model, &d.examples, &d.kb, depth).unwrap();
    let single = distilled.to_model(&model);
    assert_eq!(single.psi0, 0.0);
    for (q, _) in d.examples.labeled() {
        let a = model.potential(q, &d.kb).unwrap();
        let b = single.potential(q, &d.kb).unwrap();
        assert!((a - b).abs() < 1e-3, "{q}: {a} vs {b}");
    }
}

#[test]
fn distilled_tree_tracks_the_ensemble() {
    let d = domain();
    let model = trained(&d, 20);
    let distilled = distill_single_tree(&model, &d.examples, &d.kb, 10).unwrap();
    assert!(distilled.tree.depth() <= 10);
    let single = distilled.to_model(&model);
    let close = d
        .examples
        .labeled()
        .filter(|(q, _)| (single.potential(q, &d.kb).unwrap() - model.potential(q, &d.kb).unwrap()).abs() < 0.1)
        .count();
    let share = close as f64 / d.examples.len() as f64;
    assert!(share >= 0.9, "only {share:.3} within 0.1");
    for (q, _) in d.examples.labeled().take(50) {
        let net = paths_to_lrbm(&single).unwrap();
        let a = lrbm_inference(&net, q, &d.kb).unwrap().psi;
        assert!((a - single.potential(q, &d.kb).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn distillation_needs_examples() {
    let d = domain();
    let model = trained(&d, 1);
    let empty = d.examples.select(&[]);
    assert!(distill_single_tree(&model, &empty, &d.kb, 10).is_err());
}

#[test]
fn inference_rejects_queries_for_other_predicates() {
    let schema = movie_schema();
    let kb = movie_kb("actedin(p1, m1).\n");
    let wrong = schema.atom("actedin(p1, m1)").unwrap();
    assert!(lrbm_inference(&rule_network(), &wrong, &kb).is_err());
    let unknown = schema.atom("collab(p1, p9)").unwrap();
    assert!(lrbm_inference(&rule_network(), &unknown, &kb).is_err());
}
