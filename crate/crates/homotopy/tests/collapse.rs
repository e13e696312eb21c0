use ep_model::{fixtures, EndPeriodic, Sign};
use homotopy::boundary_collapse;

fn one_vertex_per_component(p: &EndPeriodic) -> bool {
    [Sign::Attracting, Sign::Repelling].into_iter().all(|s| {
        let b = p.block(s);
        b.graph.components().iter().all(|c| c.len() == 1)
    })
}

fn boundary_shape(p: &EndPeriodic) -> Vec<(String, usize, i64)> {
    let mut out = Vec::new();
    for s in [Sign::Attracting, Sign::Repelling] {
        for c in boundary::compute_boundary(p, s).unwrap().components {
            let end = p.orbit(&c.leader).unwrap().members.len();
            out.push((format!("{}{}", s.symbol(), end), c.graph.vertex_count(), c.euler_characteristic()));
        }
    }
    out.sort();
    out
}

#[test]
fn line_and_roseray_are_already_collapsed() {
    for p in [fixtures::line(), fixtures::roseray()] {
        let r = boundary_collapse(&p).unwrap();
        assert!(r.removed.is_empty());
        assert!(r.forest_pos.is_empty() && r.forest_neg.is_empty());
        assert!(r.square_commutes);
        assert_eq!(
            r.collapsed.block(Sign::Attracting).graph,
            p.block(Sign::Attracting).graph
        );
        assert!(r.collapsed.valence_one_vertices().is_empty());
        assert_eq!(r.collapsed, p);
    }
}

#[test]
fn fig1_collapses() {
    let p = fixtures::fig1();
    let r = boundary_collapse(&p).unwrap();
    let c = &r.collapsed;
    assert!(!one_vertex_per_component(&p));
    assert!(one_vertex_per_component(c));
    assert!(r.square_commutes);
    assert!(r.removed.is_empty());
    assert!(c.valence_one_vertices().is_empty());
    // Same ends and periods.
    let ends = |q: &EndPeriodic| {
        let mut v: Vec<_> = q.presentation().ends.iter().map(|e| (e.id.clone(), e.sign, e.period)).collect();
        v.sort();
        v
    };
    assert_eq!(ends(c), ends(&p));
    // Boundary components keep their Euler characteristic and are single
    // vertices after collapsing.
    let before = boundary_shape(&p);
    let after = boundary_shape(c);
    assert_eq!(before.len(), after.len());
    for (b, a) in before.iter().zip(&after) {
        assert_eq!((&b.0, b.2), (&a.0, a.2));
        assert_eq!(a.1, 1);
    }
    let again = EndPeriodic::from_json(&c.presentation().to_json()).unwrap();
    assert_eq!(&again, c);
}

#[test]
fn valence_one_vertex_is_removed() {
    let mut p = fixtures::presentation(fixtures::ROSERAY);
    p.core.add_vertex("z").unwrap();
    p.core.add_edge("f", "c2", "z").unwrap();
    p.map.vertices.insert("z".into(), "x".into());
    p.map.edges.insert("f".into(), vec!["l".parse().unwrap()]);
    let p = EndPeriodic::new(p).unwrap();
    let r = boundary_collapse(&p).unwrap();
    assert_eq!(r.removed.len(), 1);
    assert_eq!((r.removed[0].vertex.as_str(), r.removed[0].edge.as_str()), ("z", "f"));
    assert!(r.removed.len() <= p.core.vertex_count());
    assert!(r.collapsed.valence_one_vertices().is_empty());
    assert!(r.square_commutes);
}
