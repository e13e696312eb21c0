use std::collections::BTreeMap;

use folding::{certify_contracting, contract_collapsed, Failure, FoldError};
use graph_core::{EdgePath, FiniteGraph, GraphMap, SignedEdge};

/// Loops `a` at `u` and `b` at `v`, joined by `s: u → v`.
fn barbell() -> FiniteGraph {
    let mut g = FiniteGraph::new();
    g.add_vertex("u").unwrap();
    g.add_vertex("v").unwrap();
    g.add_edge("s", "u", "v").unwrap();
    g.add_edge("a", "u", "u").unwrap();
    g.add_edge("b", "v", "v").unwrap();
    g
}

fn map(g: &FiniteGraph, vertices: &[(&str, &str)], edges: &[(&str, &str)]) -> GraphMap {
    let on_vertices = vertices.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    let steps: BTreeMap<_, _> = edges
        .iter()
        .map(|(e, w)| {
            let s: Vec<SignedEdge> = w.split_whitespace().map(|x| x.parse().unwrap()).collect();
            (e.to_string(), s)
        })
        .collect();
    GraphMap::from_steps(g.clone(), g.clone(), on_vertices, steps).unwrap()
}

#[test]
fn collapsing_a_tree_edge_is_an_equivalence() {
    let g = barbell();
    let m = map(&g, &[("u", "u"), ("v", "u")], &[("s", ""), ("a", "a"), ("b", "s b -s")]);
    let c = certify_contracting(&m).unwrap();
    assert_eq!(c.contraction.forest, ["s"]);
    assert!(c.contraction.loops.is_empty());
    assert!(c.verdict());

    // `s b s⁻¹` at `u = m(v)` lifts to `b`; from `u` it lifts through `s`.
    let sbs = EdgePath::from_steps(&g, "u", ["s", "b", "-s"].map(|x| x.parse().unwrap()).to_vec())
        .unwrap();
    let lifted = c.lift(&sbs, &"v".to_string(), &"v".to_string()).unwrap();
    assert_eq!(lifted.step_strings(), ["b"]);
    let lifted = c.lift(&sbs, &"u".to_string(), &"u".to_string()).unwrap();
    assert_eq!(lifted.reduced().step_strings(), ["s", "b", "-s"]);
    assert_eq!(m.image_of_path(&lifted).unwrap().reduced(), sbs);
}

#[test]
fn collapsing_a_cycle_fails() {
    let g = barbell();
    let m = map(&g, &[("u", "u"), ("v", "v")], &[("s", "s"), ("a", ""), ("b", "b")]);
    let c = certify_contracting(&m).unwrap();
    assert_eq!(c.contraction.loops, ["a"]);
    assert!(!c.verdict());
    assert_eq!(c.certificate.failure, Some(Failure::CollapsedLoop("a".into())));
    assert!(matches!(
        c.lift(&EdgePath::trivial("u"), &"u".into(), &"u".into()),
        Err(FoldError::NotInvertible)
    ));
}

#[test]
fn the_quotient_factors_the_map() {
    let g = barbell();
    let m = map(&g, &[("u", "u"), ("v", "u")], &[("s", ""), ("a", "a"), ("b", "s b -s")]);
    let (c, induced) = contract_collapsed(&m).unwrap();
    assert_eq!(c.quotient.then(&induced).unwrap(), m);
    assert_eq!(induced.domain.vertex_count(), 1);
}

#[test]
fn maps_without_collapses_are_untouched() {
    let g = barbell();
    let m = GraphMap::identity(&g);
    let c = certify_contracting(&m).unwrap();
    assert!(c.contraction.forest.is_empty());
    assert!(c.verdict());
    assert_eq!(c.witness().steps.len(), 0);
}
