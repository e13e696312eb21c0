use coupling::{
    canonical_h, certify_f, couple, first_return_oracle, present_free_by_cyclic, CouplingConfig,
    Side, DEFAULT_DEPTH,
};
use ep_model::random::random_presentation;
use ep_model::unroll;
use homotopy::{boundary_collapse, homotopy_inverse};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn base_seed() -> u64 {
    std::env::var("EPCOUPLE_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(29)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_couples_are_sound(s in 0u64..10_000, edits in 1usize..8, extra in 0u32..2) {
        let p = random_presentation(&mut ChaCha8Rng::seed_from_u64(base_seed() + s), edits);
        let p = boundary_collapse(&p).unwrap().collapsed;
        let inv = homotopy_inverse(&p).unwrap();
        let h = canonical_h(&p, &inv).unwrap();
        let cfg = CouplingConfig::default();
        let m = cfg.resolve(&p, &inv.inverse).unwrap() + extra;
        let t = couple(&p, &inv.inverse, &h, &CouplingConfig::with_cutoff(m)).unwrap();

        let oracle = first_return_oracle(&t, DEFAULT_DEPTH).unwrap();
        prop_assert!(oracle.all_agree(), "{}", oracle.table());
        prop_assert!(t.matches_constituents().unwrap());
        prop_assert!(t.restricts_to_isomorphism(Side::Left));
        prop_assert!(t.restricts_to_isomorphism(Side::Right));

        let d = unroll(&t.left, m as usize).unwrap();
        let d2 = unroll(&t.right, m as usize).unwrap();
        let s_count = (t.subdividing(Side::Left).len() + t.subdividing(Side::Right).len()) as i64;
        prop_assert_eq!(
            t.euler_characteristic(),
            d.graph().euler_characteristic() + d2.graph().euler_characteristic() - s_count
        );

        let cert = certify_f(&t).unwrap();
        prop_assert!(cert.verdict);
        prop_assert!(cert.all_type1);
        let pres = present_free_by_cyclic(&t).unwrap();
        prop_assert_eq!(pres.rank as i64, 1 - t.euler_characteristic());
        prop_assert!(pres.invertible);
    }
}
