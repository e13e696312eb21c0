use boundary::{
    check_euler, compute_boundary, decorated_isomorphisms, find_decoration_maps, BoundaryComponent,
    DecoratedBoundary, Orientation,
};
use ep_model::fixtures;
use ep_model::random::random_presentation;
use ep_model::{rebase, unroll, EdgeKind, EndPeriodic, Sign};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn only(b: &DecoratedBoundary) -> &BoundaryComponent {
    assert_eq!(b.components.len(), 1);
    &b.components[0]
}

/// Euler characteristic of one side read off a truncation: a block far out
/// meets every component of that side once.
fn block_euler(p: &EndPeriodic, sign: Sign) -> i64 {
    let t = unroll(p, 3).unwrap();
    let k = match sign {
        Sign::Attracting => 3,
        Sign::Repelling => -3,
    };
    let (vs, es) = t.block_names(k);
    vs.len() as i64 - es.len() as i64
}

#[test]
fn line_boundary_is_one_joining_loop() {
    let b = compute_boundary(&fixtures::line(), Sign::Attracting).unwrap();
    let c = only(&b);
    assert_eq!(c.graph.vertex_count(), 1);
    assert_eq!(c.graph.edge_count(), 1);
    assert!(c.graph.ends("ep").unwrap().is_loop());
    assert_eq!(c.edge_class["ep"], EdgeKind::Joining);
    assert_eq!(c.subdivision["ep"], 1);
    assert_eq!(c.orientation["ep"], Orientation::Reversed);
    let n = compute_boundary(&fixtures::line(), Sign::Repelling).unwrap();
    assert_eq!(only(&n).orientation["en"], Orientation::Stored);
}

#[test]
fn fig1_negative_boundary() {
    let b = compute_boundary(&fixtures::fig1(), Sign::Repelling).unwrap();
    let c = only(&b);
    assert_eq!(c.leader, "E1");
    assert_eq!(c.joining_edges().collect::<Vec<_>>(), ["e"]);
    assert_eq!(c.subdivision["e"], 2);
    assert_eq!(b.summary(), "1 component; 1 joining edge; subdivision 2");
    // Block component k1, k2, k3 with a, b, c, d, and the ideal edge from
    // the vertex whose second image is the juncture `we`.
    assert_eq!((c.graph.vertex_count(), c.graph.edge_count()), (3, 5));
    let e = c.graph.ends("e").unwrap();
    assert_eq!((e.tail.as_str(), e.head.as_str()), ("k1", "k3"));
}

#[test]
fn fig1_positive_boundary_has_two_components() {
    let b = compute_boundary(&fixtures::fig1(), Sign::Attracting).unwrap();
    let leaders: Vec<&str> = b.components.iter().map(|c| c.leader.as_str()).collect();
    assert_eq!(leaders, ["E3", "E5"]);
    let e3 = b.component("E3").unwrap();
    assert_eq!(e3.subdivision.values().collect::<Vec<_>>(), [&2, &2]);
    let e5 = b.component("E5").unwrap();
    assert_eq!(e5.subdivision["A"], 1);
    assert_eq!(e5.edge_class["B"], EdgeKind::Subgraph);
}

#[test]
fn roseray_positive_boundary() {
    let b = compute_boundary(&fixtures::roseray(), Sign::Attracting).unwrap();
    let c = only(&b);
    assert_eq!(c.graph.vertex_count(), 1);
    assert_eq!(c.graph.edge_count(), 2);
    let joining: Vec<_> = c.joining_edges().collect();
    assert_eq!(joining, ["j"]);
    assert_eq!(c.subdivision["j"], 1);
    assert_eq!(c.edge_class["l"], EdgeKind::Subgraph);
}

#[test]
fn euler_characteristics() {
    let line = check_euler(&fixtures::line()).unwrap();
    assert_eq!((line.positive, line.negative, line.equal), (0, 0, true));
    let fig1 = check_euler(&fixtures::fig1()).unwrap();
    assert_eq!((fig1.positive, fig1.negative, fig1.equal), (-2, -2, true));
    for (name, text) in fixtures::ALL {
        let p = fixtures::load(text);
        let e = check_euler(&p).unwrap();
        assert!(e.equal, "{name}");
        assert_eq!(e.positive, block_euler(&p, Sign::Attracting), "{name}");
        assert_eq!(e.negative, block_euler(&p, Sign::Repelling), "{name}");
    }
}

#[test]
fn euler_check_runs_on_a_non_equivalence() {
    // The negative loop now wraps twice around its image.
    let mut p = fixtures::presentation(fixtures::ROSERAY);
    p.map
        .edges
        .insert("m".into(), vec!["l1".parse().unwrap(), "l1".parse().unwrap()]);
    if let Ok(p) = EndPeriodic::new(p) {
        check_euler(&p).unwrap();
    }
}

#[test]
fn line_boundaries_match() {
    let line = fixtures::line();
    let pos = compute_boundary(&line, Sign::Attracting).unwrap();
    let neg = compute_boundary(&line, Sign::Repelling).unwrap();
    let maps = find_decoration_maps(&pos, &neg, 8).unwrap();
    assert!(!maps.is_empty());
    for m in &maps {
        assert!(m.respects(&pos, &neg));
    }
    // The derived orientations agree, so the stored ones are swapped.
    assert!(!maps[0].matches[0].iso.edges["ep"].forward);
}

#[test]
fn mismatched_boundaries_have_no_maps() {
    let fig1 = fixtures::fig1();
    let pos = compute_boundary(&fig1, Sign::Attracting).unwrap();
    let neg = compute_boundary(&fixtures::line(), Sign::Repelling).unwrap();
    assert!(find_decoration_maps(&pos, &neg, 8).unwrap().is_empty());

    // Same graph as the FIG1 negative side, offered as a positive boundary.
    let neg = compute_boundary(&fig1, Sign::Repelling).unwrap();
    let mut twin = neg.clone();
    twin.sign = Sign::Attracting;
    assert!(!find_decoration_maps(&twin, &neg, 8).unwrap().is_empty());
    twin.components[0].subdivision.insert("e".into(), 1);
    assert!(find_decoration_maps(&twin, &neg, 8).unwrap().is_empty());
}

fn same_side_isomorphic(a: &DecoratedBoundary, b: &DecoratedBoundary, p: &EndPeriodic) -> bool {
    a.components.len() == b.components.len()
        && a.components.iter().all(|x| {
            let orbit = p.orbit(&x.leader).unwrap();
            let y = b
                .components
                .iter()
                .find(|y| orbit.members.contains(&y.leader))
                .unwrap();
            !decorated_isomorphisms(x, y, 1).unwrap().is_empty()
        })
}

#[test]
fn boundary_survives_rebasing() {
    for (name, text) in fixtures::ALL {
        let p = fixtures::load(text);
        let q = rebase(&p).unwrap();
        for sign in [Sign::Attracting, Sign::Repelling] {
            let a = compute_boundary(&p, sign).unwrap();
            let b = compute_boundary(&q, sign).unwrap();
            assert!(same_side_isomorphic(&a, &b, &p), "{name} {sign:?}");
        }
    }
}

#[test]
fn dot_output_marks_joining_edges() {
    let b = compute_boundary(&fixtures::fig1(), Sign::Repelling).unwrap();
    let dot = b.to_dot("minus");
    assert!(dot.contains("e (2)"));
    assert!(dot.contains("color=\"red\""));
    let plus = compute_boundary(&fixtures::line(), Sign::Attracting).unwrap();
    assert!(plus.to_dot("plus").contains("dir=back"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_boundaries(seed in any::<u64>(), edits in 0usize..10) {
        let p = random_presentation(&mut ChaCha8Rng::seed_from_u64(seed), edits);
        for sign in [Sign::Attracting, Sign::Repelling] {
            let b = compute_boundary(&p, sign).unwrap();
            prop_assert_eq!(b.components.len(), p.orbits_of(sign).count());
            for c in &b.components {
                let q = p.orbit(&c.leader).unwrap().period();
                prop_assert!(c.subdivision.values().all(|s| *s == q));
            }
            prop_assert_eq!(b.euler_characteristic(), block_euler(&p, sign));
        }
        prop_assert!(check_euler(&p).unwrap().equal);
        let q = rebase(&p).unwrap();
        for sign in [Sign::Attracting, Sign::Repelling] {
            let a = compute_boundary(&p, sign).unwrap();
            let b = compute_boundary(&q, sign).unwrap();
            prop_assert!(same_side_isomorphic(&a, &b, &p));
        }
        let pos = compute_boundary(&p, Sign::Attracting).unwrap();
        let neg = compute_boundary(&p, Sign::Repelling).unwrap();
        for m in find_decoration_maps(&pos, &neg, 4).unwrap() {
            prop_assert!(m.respects(&pos, &neg));
        }
    }
}
