use std::collections::{BTreeMap, BTreeSet};

use graph_core::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn s(x: &str) -> SignedEdge {
    x.parse().unwrap()
}

fn graph(vs: &[&str], es: &[(&str, &str, &str)]) -> FiniteGraph {
    FiniteGraph::from_parts(
        vs.iter().copied(),
        es.iter()
            .map(|(e, t, h)| (e.to_string(), t.to_string(), h.to_string())),
    )
    .unwrap()
}

fn circle() -> FiniteGraph {
    graph(&["v"], &[("a", "v", "v")])
}

fn rose2() -> FiniteGraph {
    graph(&["v"], &[("a", "v", "v"), ("b", "v", "v")])
}

fn theta() -> FiniteGraph {
    graph(
        &["u", "w"],
        &[("e1", "u", "w"), ("e2", "u", "w"), ("e3", "u", "w")],
    )
}

fn map(dom: &FiniteGraph, cod: &FiniteGraph, vs: &[(&str, &str)], es: &[(&str, &[&str])]) -> GraphMap {
    let on_vertices = vs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    let steps = es
        .iter()
        .map(|(e, p)| (e.to_string(), p.iter().map(|x| s(x)).collect()))
        .collect();
    GraphMap::from_steps(dom.clone(), cod.clone(), on_vertices, steps).unwrap()
}

/// Independent reduction: delete the first cancelling pair, rescan, repeat.
fn naive_reduce(steps: &[SignedEdge]) -> Vec<SignedEdge> {
    let mut v = steps.to_vec();
    loop {
        let hit = (0..v.len().saturating_sub(1)).find(|&i| v[i].is_inverse_of(&v[i + 1]));
        match hit {
            Some(i) => {
                v.drain(i..i + 2);
            }
            None => return v,
        }
    }
}

#[test]
fn reduce_total_cancellation() {
    let g = circle();
    let p = EdgePath::from_steps(&g, "v", vec![s("a"), s("-a")]).unwrap();
    assert_eq!(reduce_path(&p), EdgePath::trivial("v"));
}

#[test]
fn reduce_inner_cancellation() {
    let g = graph(
        &["p", "q", "r", "t"],
        &[("a", "p", "q"), ("b", "q", "r"), ("c", "q", "t")],
    );
    let p = EdgePath::from_steps(&g, "p", vec![s("a"), s("b"), s("-b"), s("c")]).unwrap();
    assert_eq!(reduce_path(&p).steps, vec![s("a"), s("c")]);
}

#[test]
fn reduce_matches_naive_oracle_on_random_paths() {
    let g = graph(
        &["0", "1", "2", "3"],
        &[
            ("a", "0", "1"),
            ("b", "1", "2"),
            ("c", "2", "3"),
            ("d", "3", "0"),
            ("l", "1", "1"),
            ("m", "0", "2"),
        ],
    );
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let mut at = "0".to_string();
        let mut steps = Vec::new();
        for _ in 0..rng.gen_range(0..16) {
            let star = g.star(&at);
            let pick = star[rng.gen_range(0..star.len())].clone();
            at = g.signed_head(&pick).unwrap().clone();
            steps.push(pick);
        }
        let p = EdgePath::from_steps(&g, "0", steps.clone()).unwrap();
        let r = reduce_path(&p);
        assert_eq!(r.steps, naive_reduce(&steps));
        assert_eq!(reduce_path(&r), r);
        assert!(r.is_reduced());
    }
}

#[test]
fn spanning_tree_examples() {
    let single = graph(&["v"], &[]);
    assert!(spanning_tree(&single, "v").unwrap().edges.is_empty());
    assert!(spanning_tree(&circle(), "v").unwrap().edges.is_empty());
    let t = spanning_tree(&theta(), "u").unwrap();
    assert_eq!(t.edges, BTreeSet::from(["e1".to_string()]));
    let two = graph(&["a", "b"], &[]);
    assert_eq!(spanning_tree(&two, "a").unwrap_err(), GraphError::DisconnectedGraph);
}

#[test]
fn euler_characteristic_examples() {
    assert_eq!(graph(&["v"], &[]).euler_characteristic(), 1);
    assert_eq!(circle().euler_characteristic(), 0);
    assert_eq!(rose2().euler_characteristic(), -1);
}

#[test]
fn pi1_basis_examples() {
    let tree = graph(&["a", "b"], &[("e", "a", "b")]);
    let t = spanning_tree(&tree, "a").unwrap();
    assert!(pi1_basis(&tree, &t, "a").unwrap().is_empty());

    let c = circle();
    let t = spanning_tree(&c, "v").unwrap();
    let basis = pi1_basis(&c, &t, "v").unwrap();
    assert_eq!(basis.len(), 1);
    assert_eq!(basis[0].1.steps, vec![s("a")]);

    // Non-tree edges e2, e3 in order, each closed up through e1.
    let g = theta();
    let t = spanning_tree(&g, "u").unwrap();
    let basis = pi1_basis(&g, &t, "u").unwrap();
    let mut expected = Vec::new();
    for e in ["e2", "e3"] {
        let ends = g.ends(e).unwrap();
        let mut steps = t.path("u", &ends.tail).unwrap().steps;
        steps.push(s(e));
        steps.extend(t.path(&ends.head, "u").unwrap().steps);
        expected.push((e.to_string(), naive_reduce(&steps)));
    }
    let got: Vec<(String, Vec<SignedEdge>)> =
        basis.into_iter().map(|(e, p)| (e, p.steps)).collect();
    assert_eq!(got, expected);
    assert_eq!(got[0].1, vec![s("e2"), s("-e1")]);
    assert_eq!(got[1].1, vec![s("e3"), s("-e1")]);
}

#[test]
fn induced_map_examples() {
    let c = circle();
    let t = spanning_tree(&c, "v").unwrap();
    let id = GraphMap::identity(&c);
    assert!(induced_pi1_map(&id, &t, &t, "v").unwrap().is_identity());

    let double = map(&c, &c, &[("v", "v")], &[("a", &["a", "a"])]);
    let w = induced_pi1_map(&double, &t, &t, "v").unwrap();
    assert_eq!(w.images, vec![Word(vec![1, 1])]);

    let r = rose2();
    let t = spanning_tree(&r, "v").unwrap();
    let nielsen = map(&r, &r, &[("v", "v")], &[("a", &["a", "b"]), ("b", &["b"])]);
    let w = induced_pi1_map(&nielsen, &t, &t, "v").unwrap();
    assert_eq!(w.images, vec![Word(vec![1, 2]), Word(vec![2])]);
    assert_eq!(w.to_string(), "x1 -> x1 x2\nx2 -> x2\n");
}

#[test]
fn induced_map_rejects_unreachable_basepoint() {
    let c = circle();
    let t = spanning_tree(&c, "v").unwrap();
    let id = GraphMap::identity(&c);
    assert!(matches!(
        induced_pi1_map(&id, &t, &t, "nowhere"),
        Err(GraphError::BasepointNotMapped(_))
    ));
}

fn unlabeled() -> Labels {
    Labels::default()
}

#[test]
fn isomorphism_examples() {
    let single = graph(&["v"], &[]);
    let isos =
        graph_isomorphisms(&single, &unlabeled(), &single, &unlabeled(), 8, DEFAULT_NODE_BUDGET)
            .unwrap();
    assert_eq!(isos.len(), 1);
    assert_eq!(isos[0].vertices["v"], "v");

    let path2 = graph(&["a", "b"], &[("e", "a", "b")]);
    assert!(
        graph_isomorphisms(&circle(), &unlabeled(), &path2, &unlabeled(), 8, DEFAULT_NODE_BUDGET)
            .unwrap()
            .is_empty()
    );

    let r = rose2();
    let isos =
        graph_isomorphisms(&r, &unlabeled(), &r, &unlabeled(), 8, DEFAULT_NODE_BUDGET).unwrap();
    assert_eq!(isos.len(), 8);
    // Oracle: every (petal permutation, orientation pair) appears once.
    let mut seen = BTreeSet::new();
    for iso in &isos {
        seen.insert((iso.edges["a"].clone(), iso.edges["b"].clone()));
    }
    let mut expected = BTreeSet::new();
    for (x, y) in [("a", "b"), ("b", "a")] {
        for fx in [true, false] {
            for fy in [true, false] {
                expected.insert((SignedEdge::new(x, fx), SignedEdge::new(y, fy)));
            }
        }
    }
    assert_eq!(seen, expected);
}

#[test]
fn isomorphism_respects_labels_and_orientation() {
    let r = rose2();
    let mut labels = Labels::default();
    labels.edge.insert("a".into(), EdgeLabel::new("joining", true));
    labels.edge.insert("b".into(), EdgeLabel::new("subgraph", false));
    let isos = graph_isomorphisms(&r, &labels, &r, &labels, 100, DEFAULT_NODE_BUDGET).unwrap();
    assert_eq!(isos.len(), 2);
    assert!(isos.iter().all(|i| i.edges["a"] == s("a")));
}

#[test]
fn isomorphism_budget_overflows() {
    let many: Vec<(String, String, String)> =
        (0..8).map(|i| (format!("l{i}"), "v".into(), "v".into())).collect();
    let g = FiniteGraph::from_parts(["v"], many).unwrap();
    let err = graph_isomorphisms(&g, &unlabeled(), &g, &unlabeled(), usize::MAX, 1000).unwrap_err();
    assert_eq!(err, GraphError::Overflow(1000));
}

#[test]
fn subdivide_examples() {
    let r = rose2();
    let id = GraphMap::identity(&r);
    let sub = subdivide_for(&id).unwrap();
    assert_eq!(sub.graph, r);

    let c = circle();
    let double = map(&c, &c, &[("v", "v")], &[("a", &["a", "a"])]);
    let sub = subdivide_for(&double).unwrap();
    assert_eq!(sub.graph.vertex_count(), 2);
    assert_eq!(sub.graph.edge_count(), 2);
    assert!(sub.map.is_combinatorial());

    // A core edge sent to a two-edge path is split exactly once.
    let dom = graph(&["p", "q"], &[("d0", "p", "q")]);
    let cod = graph(
        &["x", "y", "z"],
        &[("alpha", "x", "y"), ("gamma", "y", "z")],
    );
    let m = map(&dom, &cod, &[("p", "x"), ("q", "z")], &[("d0", &["alpha", "gamma"])]);
    let sub = subdivide_for(&m).unwrap();
    assert_eq!(sub.pieces["d0"], vec!["d0/1".to_string(), "d0/2".to_string()]);
    assert_eq!(sub.graph.vertex_count(), 3);
    assert_eq!(sub.map.on_edges["d0/1"].steps, vec![s("alpha")]);
    assert_eq!(sub.map.on_edges["d0/2"].steps, vec![s("gamma")]);
}

#[test]
fn subdivide_rejects_collapse() {
    let dom = graph(&["p", "q"], &[("e", "p", "q")]);
    let cod = graph(&["x"], &[]);
    let m = map(&dom, &cod, &[("p", "x"), ("q", "x")], &[("e", &[])]);
    assert_eq!(subdivide_for(&m).unwrap_err(), GraphError::CollapsedEdge("e".into()));
}

#[test]
fn graph_json_round_trip_and_dangling_rejection() {
    let g = theta();
    let text = serde_json::to_string(&g).unwrap();
    assert_eq!(serde_json::from_str::<FiniteGraph>(&text).unwrap(), g);
    let bad = r#"{"vertices":["a"],"edges":[{"id":"e","tail":"a","head":"b"}]}"#;
    let err = serde_json::from_str::<FiniteGraph>(bad).unwrap_err().to_string();
    assert!(err.contains("`e`"), "{err}");
}

#[test]
fn signed_edge_text_form() {
    assert_eq!(s("-e"), SignedEdge::backward("e"));
    assert_eq!(s("e").reversed().reversed(), s("e"));
    assert!("-".parse::<SignedEdge>().is_err());
}

#[test]
fn dot_export_labels_edges() {
    let dot = to_dot(&theta(), "theta", &BTreeMap::new());
    assert!(dot.contains("\"u\" -> \"w\" [label=\"e2\"]"));
}

// Random connected graph on `n` vertices named 0..n with extra edges.
fn random_graph(rng: &mut ChaCha8Rng, n: usize, extra: usize) -> FiniteGraph {
    let mut g = FiniteGraph::new();
    for i in 0..n {
        g.add_vertex(i.to_string()).unwrap();
    }
    let mut k = 0;
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (t, h) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
        g.add_edge(format!("e{k:02}"), t.to_string(), h.to_string()).unwrap();
        k += 1;
    }
    for _ in 0..extra {
        let t = rng.gen_range(0..n);
        let h = rng.gen_range(0..n);
        g.add_edge(format!("e{k:02}"), t.to_string(), h.to_string()).unwrap();
        k += 1;
    }
    g
}

// Random map fixing vertex "0", each edge sent through a random detour.
fn random_map(rng: &mut ChaCha8Rng, dom: &FiniteGraph, cod: &FiniteGraph) -> GraphMap {
    let t = spanning_tree(cod, "0").unwrap();
    let cv: Vec<&Id> = cod.vertices().collect();
    let mut on_vertices = BTreeMap::new();
    for v in dom.vertices() {
        let img = if v == "0" { "0".to_string() } else { cv[rng.gen_range(0..cv.len())].clone() };
        on_vertices.insert(v.clone(), img);
    }
    let ce: Vec<&Id> = cod.edge_ids().collect();
    let mut on_edges = BTreeMap::new();
    for (e, ends) in dom.edges() {
        let a = &on_vertices[&ends.tail];
        let b = &on_vertices[&ends.head];
        let x = SignedEdge::new(ce[rng.gen_range(0..ce.len())].clone(), rng.gen_bool(0.5));
        let xt = cod.signed_tail(&x).unwrap();
        let xh = cod.signed_head(&x).unwrap();
        let p = t
            .path(a, xt)
            .unwrap()
            .concat(&EdgePath::single(cod, x.clone()).unwrap())
            .unwrap()
            .concat(&t.path(xh, b).unwrap())
            .unwrap();
        on_edges.insert(e.clone(), p);
    }
    GraphMap::new(dom.clone(), cod.clone(), on_vertices, on_edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduce_is_idempotent_and_shortening(seed in any::<u64>(), len in 0usize..24) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 4, 3);
        let mut at = "0".to_string();
        let mut steps = Vec::new();
        for _ in 0..len {
            let star = g.star(&at);
            let pick = star[rng.gen_range(0..star.len())].clone();
            at = g.signed_head(&pick).unwrap().clone();
            steps.push(pick);
        }
        let p = EdgePath::from_steps(&g, "0", steps).unwrap();
        let r = reduce_path(&p);
        prop_assert!(r.len() <= p.len());
        prop_assert_eq!(reduce_path(&r), r.clone());
        prop_assert!(r.validate(&g).is_ok());
    }

    #[test]
    fn basis_size_is_one_minus_euler(seed in any::<u64>(), n in 1usize..7, extra in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n, extra);
        let t = spanning_tree(&g, "0").unwrap();
        let basis = pi1_basis(&g, &t, "0").unwrap();
        prop_assert_eq!(basis.len() as i64, 1 - g.euler_characteristic());
        for (i, (_, l)) in basis.iter().enumerate() {
            prop_assert!(l.is_loop() && l.is_reduced());
            prop_assert_eq!(t.word_of(l), Word::generator(i));
        }
    }

    #[test]
    fn induced_maps_compose(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_graph(&mut rng, 3, 2);
        let b = random_graph(&mut rng, 3, 2);
        let c = random_graph(&mut rng, 3, 2);
        let m1 = random_map(&mut rng, &a, &b);
        let m2 = random_map(&mut rng, &b, &c);
        let (ta, tb, tc) = (
            spanning_tree(&a, "0").unwrap(),
            spanning_tree(&b, "0").unwrap(),
            spanning_tree(&c, "0").unwrap(),
        );
        let w1 = induced_pi1_map(&m1, &ta, &tb, "0").unwrap();
        let w2 = induced_pi1_map(&m2, &tb, &tc, "0").unwrap();
        let w12 = induced_pi1_map(&m1.then(&m2).unwrap(), &ta, &tc, "0").unwrap();
        prop_assert_eq!(w12, w2.after(&w1).unwrap());
    }

    #[test]
    fn self_isomorphisms_include_identity(seed in any::<u64>(), n in 1usize..5, extra in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n, extra);
        let isos = graph_isomorphisms(&g, &Labels::default(), &g, &Labels::default(), usize::MAX, DEFAULT_NODE_BUDGET).unwrap();
        let identity = isos.iter().any(|i| {
            i.vertices.iter().all(|(a, b)| a == b) && i.edges.iter().all(|(e, x)| x.edge == *e && x.forward)
        });
        prop_assert!(identity);
        for iso in &isos {
            for (e, ends) in g.edges() {
                let img = &iso.edges[e];
                prop_assert_eq!(g.signed_tail(img).unwrap(), &iso.vertices[&ends.tail]);
                prop_assert_eq!(g.signed_head(img).unwrap(), &iso.vertices[&ends.head]);
            }
        }
    }

    #[test]
    fn subdivision_spells_original_images(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_graph(&mut rng, 3, 2);
        let b = random_graph(&mut rng, 3, 2);
        let m = random_map(&mut rng, &a, &b);
        let sub = subdivide_for(&m).unwrap();
        prop_assert!(sub.map.is_combinatorial());
        for (e, p) in &m.on_edges {
            prop_assert_eq!(&sub.spelled(e).unwrap(), &p.steps);
        }
    }
}
