use std::collections::BTreeMap;

use folding::{
    certify_homotopy_equivalence, certify_shuffled, fold_decompose, spelled_image, Failure,
    FoldError, FoldKind, TerminalKind,
};
use graph_core::{induced_pi1_map, EdgePath, spanning_tree, FiniteGraph, GraphMap, SignedEdge, Word};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rose(k: usize) -> FiniteGraph {
    let mut g = FiniteGraph::new();
    g.add_vertex("o").unwrap();
    for i in 0..k {
        g.add_edge(format!("x{}", i + 1), "o", "o").unwrap();
    }
    g
}

fn steps(word: &[i32]) -> Vec<SignedEdge> {
    word.iter()
        .map(|&l| SignedEdge::new(format!("x{}", l.abs()), l > 0))
        .collect()
}

/// The endomorphism of the rose with `x_i ↦ words[i]`.
fn rose_map(words: &[Vec<i32>]) -> GraphMap {
    let g = rose(words.len());
    let vertices = BTreeMap::from([("o".to_string(), "o".to_string())]);
    let edges = words
        .iter()
        .enumerate()
        .map(|(i, w)| (format!("x{}", i + 1), steps(w)))
        .collect();
    GraphMap::from_steps(g.clone(), g, vertices, edges).unwrap()
}

fn circle(n: usize) -> FiniteGraph {
    let mut g = FiniteGraph::new();
    for i in 0..n {
        g.add_vertex(format!("v{i}")).unwrap();
    }
    for i in 0..n {
        g.add_edge(format!("c{i}"), format!("v{i}"), format!("v{}", (i + 1) % n))
            .unwrap();
    }
    g
}

#[test]
fn injective_map_needs_no_folds() {
    let m = GraphMap::identity(&rose(2));
    let seq = fold_decompose(&m).unwrap();
    assert!(seq.steps.is_empty());
    assert_eq!(seq.terminal, m);
    assert_eq!(seq.terminal_kind, TerminalKind::Homeomorphism);
}

#[test]
fn parallel_edges_fold_once_with_type_two() {
    let mut dom = FiniteGraph::new();
    dom.add_vertex("u").unwrap();
    dom.add_vertex("v").unwrap();
    dom.add_edge("a", "u", "v").unwrap();
    dom.add_edge("b", "u", "v").unwrap();
    let mut cod = FiniteGraph::new();
    cod.add_vertex("p").unwrap();
    cod.add_vertex("q").unwrap();
    cod.add_edge("c", "p", "q").unwrap();
    let vertices = BTreeMap::from([("u".into(), "p".into()), ("v".into(), "q".into())]);
    let edges = BTreeMap::from([
        ("a".into(), vec![SignedEdge::forward("c")]),
        ("b".into(), vec![SignedEdge::forward("c")]),
    ]);
    let m = GraphMap::from_steps(dom, cod, vertices, edges).unwrap();
    let seq = fold_decompose(&m).unwrap();
    assert_eq!(seq.steps.len(), 1);
    assert_eq!(seq.steps[0].kind, FoldKind::Type2);
    assert_eq!(seq.steps[0].kept, SignedEdge::forward("a"));
    assert_eq!(seq.steps[0].second, SignedEdge::forward("b"));
    assert_eq!(seq.terminal_kind, TerminalKind::Homeomorphism);
}

#[test]
fn nielsen_move_on_the_rose() {
    // Subdivided: x1/1 ↦ x1, x1/2 ↦ x2, x2 ↦ x2. The only fold identifies
    // the incoming ends of x1/2 and x2 at o.
    let m = rose_map(&[vec![1, 2], vec![2]]);
    let seq = fold_decompose(&m).unwrap();
    assert_eq!(seq.steps.len(), 1);
    assert_eq!(seq.steps[0].kind, FoldKind::Type1);
    assert_eq!(seq.steps[0].kept, SignedEdge::backward("x1/2"));
    assert_eq!(seq.steps[0].second, SignedEdge::backward("x2"));
    assert_eq!(seq.terminal_kind, TerminalKind::Homeomorphism);
    let cert = certify_homotopy_equivalence(&m).unwrap();
    assert!(cert.verdict);
}

#[test]
fn lifting_inverts_the_nielsen_move() {
    let seq = fold_decompose(&rose_map(&[vec![1, 2], vec![2]])).unwrap();
    let o = "o".to_string();
    let x1 = EdgePath { start: o.clone(), end: o.clone(), steps: steps(&[1]) };
    assert_eq!(seq.lift(&x1, &o, &o).unwrap().steps, steps(&[1, -2]));
}

#[test]
fn lifting_needs_an_equivalence() {
    let seq = fold_decompose(&rose_map(&[vec![1, 1], vec![2]])).unwrap();
    let o = "o".to_string();
    let x2 = EdgePath { start: o.clone(), end: o.clone(), steps: steps(&[2]) };
    assert!(matches!(seq.lift(&x2, &o, &o), Err(FoldError::NotInvertible)));
}

#[test]
fn identity_on_circle_certifies() {
    let m = GraphMap::identity(&circle(3));
    assert!(certify_homotopy_equivalence(&m).unwrap().verdict);
}

#[test]
fn degree_two_circle_map_fails() {
    let dom = circle(2);
    let cod = circle(1);
    let vertices = dom.vertices().map(|v| (v.clone(), "v0".to_string())).collect();
    let edges = dom
        .edge_ids()
        .map(|e| (e.clone(), vec![SignedEdge::forward("c0")]))
        .collect();
    let m = GraphMap::from_steps(dom.clone(), cod.clone(), vertices, edges).unwrap();
    let cert = certify_homotopy_equivalence(&m).unwrap();
    assert!(!cert.verdict);
    assert_eq!(cert.failure, Some(Failure::NotBijective));
    assert_eq!(cert.witness.terminal_kind, TerminalKind::Immersion);
    // The word oracle sees index two.
    let td = spanning_tree(&dom, "v0").unwrap();
    let tc = spanning_tree(&cod, "v0").unwrap();
    let w = induced_pi1_map(&m, &td, &tc, "v0").unwrap();
    assert_eq!(w.images, vec![Word(vec![1, 1])]);
}

#[test]
fn valence_one_and_collapse_are_refused() {
    let mut g = rose(1);
    g.add_vertex("leaf").unwrap();
    g.add_edge("stem", "o", "leaf").unwrap();
    let m = GraphMap::identity(&g);
    assert!(matches!(
        certify_homotopy_equivalence(&m),
        Err(FoldError::Valence1Vertex(v)) if v == ["leaf"]
    ));
    let m = rose_map(&[vec![1, -1]]).reduced();
    assert!(matches!(
        fold_decompose(&m),
        Err(FoldError::CollapsedEdge(e)) if e == "x1"
    ));
}

fn cyclic_reduce(mut w: Vec<i32>) -> Vec<i32> {
    w = Word(w).reduced().0;
    while w.len() >= 2 && w[0] == -w[w.len() - 1] {
        w.remove(0);
        w.pop();
    }
    w
}

fn is_rotation(a: &[i32], b: &[i32]) -> bool {
    a.len() == b.len() && (a.is_empty() || (0..a.len()).any(|r| a[r..].iter().chain(&a[..r]).eq(b)))
}

/// An endomorphism of F₂ is an automorphism iff it sends `[x1,x2]` to a
/// conjugate of `[x1,x2]^{±1}`.
fn f2_automorphism(u: &[i32], v: &[i32]) -> bool {
    let inv = |w: &[i32]| w.iter().rev().map(|x| -x).collect::<Vec<_>>();
    let mut c = u.to_vec();
    c.extend_from_slice(v);
    c.extend(inv(u));
    c.extend(inv(v));
    let c = cyclic_reduce(c);
    is_rotation(&c, &[1, 2, -1, -2]) || is_rotation(&c, &[2, 1, -2, -1])
}

fn word() -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(prop_oneof![Just(1), Just(-1), Just(2), Just(-2)], 1..6)
        .prop_map(|w| Word(w).reduced().0)
        .prop_filter("nonempty", |w| !w.is_empty())
}

fn nielsen_product(moves: &[(bool, bool)]) -> Vec<Vec<i32>> {
    let mut w = vec![vec![1], vec![2]];
    for &(first, invert) in moves {
        let (a, b) = if first { (0, 1) } else { (1, 0) };
        let mut x = w[a].clone();
        let y: Vec<i32> = if invert {
            w[b].iter().rev().map(|l| -l).collect()
        } else {
            w[b].clone()
        };
        x.extend(y);
        w[a] = Word(x).reduced().0;
    }
    w
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn verdict_matches_the_commutator_test(u in word(), v in word()) {
        let m = rose_map(&[u.clone(), v.clone()]);
        let cert = certify_homotopy_equivalence(&m).unwrap();
        prop_assert_eq!(cert.verdict, f2_automorphism(&u, &v));
        if cert.witness.first_type2().is_some() {
            prop_assert!(!cert.verdict);
        }
    }

    #[test]
    fn composition_reproduces_the_map(u in word(), v in word(), w in word()) {
        let m = rose_map(&[u, v, w]);
        let seq = fold_decompose(&m).unwrap();
        prop_assert_eq!(&seq.compose().unwrap(), &seq.start);
        for e in m.domain.edge_ids() {
            prop_assert_eq!(spelled_image(&seq, e), Some(m.on_edges[e].clone()));
        }
        prop_assert!(seq.steps.len() <= seq.start.domain.edge_count());
    }

    #[test]
    fn nielsen_products_certify(moves in prop::collection::vec((any::<bool>(), any::<bool>()), 0..8)) {
        let words = nielsen_product(&moves);
        prop_assume!(words.iter().all(|w| !w.is_empty()));
        let cert = certify_homotopy_equivalence(&rose_map(&words)).unwrap();
        prop_assert!(cert.verdict);
        prop_assert!(cert.witness.all_type1());
    }

    #[test]
    fn lifts_are_sections(moves in prop::collection::vec((any::<bool>(), any::<bool>()), 0..8), target in word()) {
        let words = nielsen_product(&moves);
        prop_assume!(words.iter().all(|w| !w.is_empty()));
        let m = rose_map(&words);
        let seq = fold_decompose(&m).unwrap();
        let gamma = EdgePath { start: "o".into(), end: "o".into(), steps: steps(&target) };
        let lifted = seq.lift(&gamma, &"o".to_string(), &"o".to_string()).unwrap();
        prop_assert!(lifted.is_reduced());
        prop_assert_eq!(m.image_of_path(&lifted).unwrap().reduced(), gamma.reduced());
    }

    #[test]
    fn verdict_ignores_fold_order(u in word(), v in word(), seed in any::<u64>()) {
        let m = rose_map(&[u, v]);
        let want = certify_homotopy_equivalence(&m).unwrap().verdict;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..10 {
            let cert = certify_shuffled(&m, &mut rng).unwrap();
            prop_assert_eq!(cert.verdict, want);
            prop_assert_eq!(&cert.witness.compose().unwrap(), &cert.witness.start);
        }
    }
}
