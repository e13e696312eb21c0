use ep_model::random::random_presentation;
use ep_model::{proper_core, unroll, Cell, CellStep, Image, Presentation};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn model(seed: u64, edits: usize) -> ep_model::EndPeriodic {
    random_presentation(&mut ChaCha8Rng::seed_from_u64(seed), edits)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn blocks_shift_onto_blocks(seed in any::<u64>(), edits in 0usize..8) {
        let p = model(seed, edits);
        for k in [1i64, 2, -2, -3] {
            let (vs, es) = p.block_cells(k);
            for v in vs {
                prop_assert_eq!(p.vertex_image(&v).unwrap(), v.shifted(1));
            }
            for e in es {
                let img = p.edge_image(&e).unwrap();
                prop_assert_eq!(img, vec![CellStep::new(e.shifted(1), true)]);
                // Ends move with the edge.
                let (t, h) = p.edge_ends(&e).unwrap();
                let (t1, h1) = p.edge_ends(&e.shifted(1)).unwrap();
                prop_assert_eq!(p.vertex_image(&t).unwrap(), t1);
                prop_assert_eq!(p.vertex_image(&h).unwrap(), h1);
            }
        }
    }

    #[test]
    fn truncation_partitions_into_blocks(seed in any::<u64>(), edits in 0usize..8, n in 1usize..4) {
        let p = model(seed, edits);
        let t = unroll(&p, n).unwrap();
        let mut vertices = 0;
        let mut edges = 0;
        for k in -(n as i64)..=(n as i64) {
            let (vs, es) = t.block_names(k);
            vertices += vs.len();
            edges += es.len();
            let (cv, ce) = p.block_cells(k);
            prop_assert_eq!(vs.len(), cv.len());
            prop_assert_eq!(es.len(), ce.len());
        }
        prop_assert_eq!(vertices, t.graph().vertex_count());
        prop_assert_eq!(edges, t.graph().edge_count());
        prop_assert!(t.graph().is_connected());
    }

    #[test]
    fn evaluation_is_stable_under_deeper_truncation(seed in any::<u64>(), edits in 0usize..8) {
        let p = model(seed, edits);
        let small = unroll(&p, 2).unwrap();
        let big = unroll(&p, 3).unwrap();
        for name in small.graph().vertices().chain(small.graph().edge_ids()) {
            if let Ok(img) = small.evaluate(name) {
                prop_assert_eq!(Some(img), big.evaluate(name).ok());
            }
        }
        prop_assert!(matches!(big.evaluate("o"), Ok(Image::Vertex(_))));
    }

    #[test]
    fn proper_core_contains_the_core(seed in any::<u64>(), edits in 0usize..8) {
        let p = model(seed, edits);
        let (n, q) = proper_core(&p).unwrap();
        prop_assert!(n <= 1);
        prop_assert!(ep_model::is_proper(&q));
        for v in p.core.vertices() {
            prop_assert!(q.core.has_vertex(v));
        }
        for e in p.core.edge_ids() {
            prop_assert!(q.core.has_edge(e));
        }
        prop_assert!(q.is_vertex(&Cell::core("o")));
    }

    #[test]
    fn json_round_trips(seed in any::<u64>(), edits in 0usize..8) {
        let p = model(seed, edits);
        let text = p.presentation().to_json();
        let back = Presentation::from_json(&text).unwrap();
        prop_assert_eq!(&back, p.presentation());
        prop_assert_eq!(back.to_json(), text);
    }
}
