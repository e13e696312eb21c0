use ep_model::random::random_presentation;
use ep_model::Sign;
use homotopy::{boundary_collapse, homotopy_inverse};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn base_seed() -> u64 {
    std::env::var("EPCOUPLE_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(13)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inverses_pass_their_checks(s in 0u64..10_000, edits in 2usize..12) {
        let p = random_presentation(&mut ChaCha8Rng::seed_from_u64(base_seed() + s), edits);
        let r = homotopy_inverse(&p).unwrap();
        prop_assert!(r.checks.all());
        prop_assert!(r.tree.invariant);
        // Ends swap roles with the same periods.
        for o in &p.orbits {
            let e = r.inverse.presentation().ends.iter().find(|e| e.id == o.leader).unwrap();
            prop_assert_eq!(e.sign, o.sign.opposite());
            prop_assert_eq!(e.period, o.period());
        }
    }

    #[test]
    fn collapse_invariants(s in 0u64..10_000, edits in 2usize..12) {
        let p = random_presentation(&mut ChaCha8Rng::seed_from_u64(base_seed() + s), edits);
        let r = boundary_collapse(&p).unwrap();
        prop_assert!(r.square_commutes);
        prop_assert!(r.collapsed.valence_one_vertices().is_empty());
        for sign in [Sign::Attracting, Sign::Repelling] {
            let b = r.collapsed.block(sign);
            prop_assert!(b.graph.components().iter().all(|c| c.len() == 1));
            let x = boundary::check_euler(&p).unwrap();
            let y = boundary::check_euler(&r.collapsed).unwrap();
            prop_assert_eq!((x.positive, x.negative), (y.positive, y.negative));
        }
    }
}
