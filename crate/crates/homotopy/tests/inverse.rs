use ep_model::{fixtures, unroll, EndPeriodic, Image, Truncation};
use graph_core::{spanning_tree, EdgePath, SignedEdge};
use homotopy::{build_end_invariant_tree, homotopy_inverse, HomotopyError};

/// Image of a path under a truncation's map, edge by edge.
fn image(t: &Truncation, p: &EdgePath) -> EdgePath {
    let Image::Vertex(start) = t.evaluate(&p.start).unwrap() else {
        panic!("vertex")
    };
    let mut out = EdgePath::trivial(start);
    for s in &p.steps {
        let Image::Path(img) = t.evaluate(&s.edge).unwrap() else {
            panic!("edge")
        };
        let img = if s.forward { img } else { img.inverse() };
        out = out.concat(&img).unwrap();
    }
    out
}

fn loop_of(t: &graph_core::SpanningTree, g: &graph_core::FiniteGraph, root: &str, x: &str) -> EdgePath {
    let ends = g.ends_of(x).unwrap();
    let mut steps = t.path(root, &ends.tail).unwrap().steps;
    steps.push(SignedEdge::forward(x));
    steps.extend(t.path(&ends.head, root).unwrap().steps);
    EdgePath::from_steps(g, root, steps).unwrap()
}

/// Independent word check: on a BFS basis of `Γ₃`, both composites return
/// every loop after conjugating by the recorded slide.
fn composites_are_identity(p: &EndPeriodic) {
    let r = homotopy_inverse(p).unwrap();
    let base = &r.tree.base;
    let tg = unroll(base, r.level as usize + 6).unwrap();
    let tgp = unroll(&r.inverse, 5).unwrap();
    let g3 = unroll(base, 3).unwrap();
    let graph = g3.graph();
    let root = &r.basepoint;
    let bfs = spanning_tree(graph, root).unwrap();
    // Without a slide the composites fix the basepoint and no conjugation
    // is needed.
    let delta = r.slide.clone().unwrap_or_else(|| EdgePath::trivial(root.clone()));
    let gd = match &r.slide {
        Some(d) => image(&tgp, d),
        None => delta.clone(),
    };
    assert!(bfs.rank() > 0 || graph.is_forest());
    for x in &bfs.generators {
        let gamma = loop_of(&bfs, graph, root, x).reduced();
        let left = image(&tgp, &image(&tg, &gamma));
        let left = gd.concat(&left).unwrap().concat(&gd.inverse()).unwrap().reduced();
        assert_eq!(left, gamma, "g'g on {x}");
        let right = image(&tg, &image(&tgp, &gamma));
        let right = delta.concat(&right).unwrap().concat(&delta.inverse()).unwrap().reduced();
        assert_eq!(right, gamma, "gg' on {x}");
    }
}

#[test]
fn fixtures_pass_all_checks() {
    for (name, text) in fixtures::ALL {
        let r = homotopy_inverse(&fixtures::load(text)).unwrap();
        assert!(r.checks.all(), "{name}: {:?}", r.checks);
        assert!(r.tree.invariant, "{name}");
        // The inverse is a presentation in its own right.
        let again = EndPeriodic::from_json(&r.inverse.presentation().to_json()).unwrap();
        assert_eq!(&again, &r.inverse, "{name}");
    }
}

#[test]
fn fig1_composites_are_identity() {
    composites_are_identity(&fixtures::fig1());
}

#[test]
fn roseray_and_rose2_composites_are_identity() {
    composites_are_identity(&fixtures::roseray());
    composites_are_identity(&fixtures::rose2());
}

#[test]
fn line_inverse_is_the_backward_shift() {
    let r = homotopy_inverse(&fixtures::line()).unwrap();
    assert_eq!(r.level, 0);
    assert_eq!(r.inverse.core.vertex_count(), 1);
    let t = unroll(&r.inverse, 3).unwrap();
    // Position along the line: `n@-k` sits at −k, `p@k` at k.
    let at = |x: &str| x.split_once('@').map_or(0, |(_, k)| k.parse::<i64>().unwrap());
    let mut moved = 0;
    for name in t.cells.vertex_cells.keys() {
        let Ok(Image::Vertex(v)) = t.evaluate(name) else { continue };
        assert_eq!(at(&v), at(name) - 1, "{name}");
        moved += 1;
    }
    assert_eq!(moved, 6);
    assert!(r.eta.is_empty() && r.corrections.is_empty() && r.slide.is_none());
}

#[test]
fn rose2_inverts_the_nielsen_move() {
    let r = homotopy_inverse(&fixtures::rose2()).unwrap();
    assert_eq!(r.basepoint, "o");
    assert!(r.slide.is_none());
    let map = &r.inverse.presentation().map.edges;
    let word = |e: &str| map[e].iter().map(|s| s.to_string()).collect::<Vec<_>>();
    assert_eq!(word("a"), ["a", "-b"]);
    assert_eq!(word("b"), ["b"]);
}

#[test]
fn inverse_of_inverse_is_a_presentation() {
    let r = homotopy_inverse(&fixtures::fig1()).unwrap();
    let rr = homotopy_inverse(&r.inverse).unwrap();
    assert!(rr.checks.all());
}

#[test]
fn degree_two_is_refused() {
    let mut p = fixtures::presentation(fixtures::ROSERAY);
    p.map.edges.insert("l1".into(), vec!["l2".parse().unwrap(), "l2".parse().unwrap()]);
    let p = EndPeriodic::new(p).unwrap();
    assert!(matches!(
        homotopy_inverse(&p),
        Err(HomotopyError::NotHomotopyEquivalence)
    ));
}

#[test]
fn trees() {
    let line = build_end_invariant_tree(&fixtures::line()).unwrap();
    let (cells, t) = line.spanning(4).unwrap();
    assert_eq!(t.edges.len(), cells.graph.edge_count());

    let rr = build_end_invariant_tree(&fixtures::roseray()).unwrap();
    let (cells, t) = rr.spanning(4).unwrap();
    for (e, ends) in cells.graph.edges() {
        assert_eq!(t.contains_edge(e), !ends.is_loop(), "{e}");
    }

    let fig1 = build_end_invariant_tree(&fixtures::fig1()).unwrap();
    assert!(!fig1.enlarged);
    assert_eq!(fig1.critical_edges(), ["C@1", "A@1", "e@-1"]);
    for tree in [&line, &rr, &fig1] {
        assert!(tree.invariant);
        for d in 1..=4 {
            assert!(tree.check_invariance(d).unwrap());
        }
    }
}
