mod common;

use common::{corpus, fixture};
use proptest::prelude::*;
use signed_inertia::matrix::{membership, pin};
use signed_inertia::{
    formula_minimal, minimum_rank, oracle_inertia, verify_equivalence, witness_for_pair, Evaluator, InertiaPair,
    OracleConfig, PairSet, Provenance, SignedGraph,
};

fn cfg() -> OracleConfig {
    OracleConfig::new(40, 0)
}

#[test]
fn minimum_ranks() {
    assert_eq!(minimum_rank(&fixture("single_vertex"), &cfg()).unwrap(), 0);
    assert_eq!(minimum_rank(&fixture("odd_edge"), &cfg()).unwrap(), 2);
    assert_eq!(minimum_rank(&fixture("path2_odd"), &cfg()).unwrap(), 2);
}

#[test]
fn oracle_examples() {
    let r = oracle_inertia(&fixture("single_vertex"), &cfg());
    assert_eq!(r.pairs, PairSet::from_pairs(&[(0, 0)]));
    let r = oracle_inertia(&fixture("odd_edge"), &cfg());
    assert_eq!(r.pairs, PairSet::from_pairs(&[(1, 1)]));
    let r = oracle_inertia(&fixture("figure1"), &cfg());
    assert!(r.pairs.contains(&InertiaPair::new(1, 2)));
    for (k, (a, _)) in &r.witnesses {
        assert!(membership(a, &fixture("figure1")).unwrap());
        assert_eq!(pin(a), *k);
    }
}

#[test]
fn budget_zero_is_grid_only() {
    let g = fixture("path2_odd_loops");
    let a = oracle_inertia(&g, &OracleConfig::new(0, 0));
    let b = oracle_inertia(&g, &OracleConfig::new(0, 99));
    assert_eq!(a.pairs, b.pairs);
    assert_eq!(a.samples, b.samples);
}

#[test]
fn witness_examples() {
    let g = fixture("path2_odd_loops");
    let t = formula_minimal(&g, &cfg()).unwrap();
    assert_eq!(t.provenance[&InertiaPair::new(2, 0)], Provenance::Term3);
    let w = witness_for_pair(&g, InertiaPair::new(2, 0), &t).unwrap();
    assert_eq!(w.pin, InertiaPair::new(2, 0));
    assert!(membership(&w.matrix, &g).unwrap());
}

#[test]
fn verify_report_shape() {
    let g = fixture("isolated3");
    let r = verify_equivalence(&g, &OracleConfig::new(200, 7)).unwrap();
    assert!(r.cong && r.passed());
    let v = serde_json::to_value(&r).unwrap();
    for key in ["graph", "frontier", "tree", "oracle", "cong", "violations"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["frontier"], serde_json::json!([[0, 0]]));
    assert_eq!(v["oracle"]["seed"], 7);
    assert!(v["oracle"]["samples"].as_u64().unwrap() > 0);
    assert_eq!(v["tree"]["kind"], "components");
}

#[test]
fn report_is_deterministic() {
    let g = fixture("figure1");
    let a = serde_json::to_string(&verify_equivalence(&g, &cfg()).unwrap()).unwrap();
    let b = serde_json::to_string(&verify_equivalence(&g, &cfg()).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn separation_invariance_on_corpus() {
    let ev = Evaluator::new(cfg());
    for (name, g) in corpus() {
        let default = ev.evaluate(&g).unwrap();
        for sep in g.find_1_separations().into_iter().filter(|s| s.is_vertex_reducing()) {
            let t = ev.evaluate_with(&g, &sep).unwrap();
            assert_eq!(t.frontier, default.frontier, "{name} at cut {}", sep.cut);
        }
    }
}

#[test]
fn witnesses_on_corpus() {
    let ev = Evaluator::new(cfg());
    for (name, g) in corpus() {
        let t = ev.evaluate(&g).unwrap();
        for a in t.frontier.iter() {
            let w = witness_for_pair(&g, *a, &t).unwrap_or_else(|e| panic!("{name} {a}: {e}"));
            assert!(membership(&w.matrix, &g).unwrap(), "{name} {a}");
            assert!(w.pin.leq(a), "{name} {a}");
        }
    }
}

#[test]
fn corpus_graphs_have_cut_vertices() {
    let all = corpus();
    assert!(all.len() >= 40);
    for (name, g) in all {
        assert!(g.vertex_count() <= 5, "{name}");
        assert!(g.first_vertex_reducing_separation().is_some(), "{name}");
        for e in g.edges() {
            let count = g.edges().iter().filter(|f| *f == e).count();
            assert!(count <= 2, "{name}: multiplicity of {e:?}");
        }
    }
}

fn components_strategy() -> impl Strategy<Value = (SignedGraph, SignedGraph)> {
    (common::graph_strategy(2), common::graph_strategy(2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn components_add((a, b) in components_strategy()) {
        let na = a.vertex_count();
        let mut edges: Vec<_> = a.edges().iter().map(|e| (e.u, e.v, e.parity)).collect();
        edges.extend(b.edges().iter().map(|e| (e.u + na, e.v + na, e.parity)));
        let g = SignedGraph::from_edges(na + b.vertex_count(), edges).unwrap();
        let ev = Evaluator::new(cfg());
        let sum = ev.evaluate(&a).unwrap().frontier.minkowski_add(&ev.evaluate(&b).unwrap().frontier).minimal();
        prop_assert_eq!(ev.evaluate(&g).unwrap().frontier.clone(), sum);
    }
}
