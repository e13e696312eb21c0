use ep_model::random::{apply, random_presentation, seed, Edit};
use ep_model::{proper_core, unroll, validate, EndPeriodic, Presentation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn base_seed() -> u64 {
    std::env::var("EPCOUPLE_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(7)
}

#[test]
fn seed_is_valid() {
    assert!(validate(&seed()).valid);
}

#[test]
fn every_edit_kind_applies_somewhere() {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed());
    let p = seed();
    for edit in [
        Edit::AddLoop,
        Edit::LanePair { with_loops: true },
        Edit::Rebase,
    ] {
        assert!(apply(&p, edit, &mut rng).is_some(), "{edit:?}");
    }
    let p = apply(&p, Edit::AddLoop, &mut rng).unwrap();
    assert!(apply(&p, Edit::Nielsen, &mut rng).is_some());
    assert!(apply(&p, Edit::Subdivide, &mut rng).is_some());
}

#[test]
fn random_presentations_are_valid_and_deterministic() {
    for i in 0..120u64 {
        let s = base_seed().wrapping_add(i);
        let a = random_presentation(&mut ChaCha8Rng::seed_from_u64(s), 12);
        let b = random_presentation(&mut ChaCha8Rng::seed_from_u64(s), 12);
        assert_eq!(a, b);
        assert!(a.valence_one_vertices().is_empty(), "seed {s}");
        let text = a.presentation().to_json();
        assert_eq!(Presentation::from_json(&text).unwrap(), *a.presentation());
        assert!(EndPeriodic::from_json(&text).is_ok());
        let (_, q) = proper_core(&a).unwrap();
        assert!(ep_model::is_proper(&q));
        unroll(&a, 3).unwrap();
    }
}
