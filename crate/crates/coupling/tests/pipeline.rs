use coupling::{
    canonical_h, certify_f, couple, first_return_oracle, present_free_by_cyclic, CouplingConfig,
    Side, ThetaComplex, DEFAULT_DEPTH,
};
use ep_model::{fixtures, EndPeriodic};
use homotopy::{boundary_collapse, homotopy_inverse};

fn theta_of(p: &EndPeriodic) -> ThetaComplex {
    let inv = homotopy_inverse(p).unwrap();
    let h = canonical_h(p, &inv).unwrap();
    couple(p, &inv.inverse, &h, &CouplingConfig::default()).unwrap()
}

fn collapsed_theta(p: &EndPeriodic) -> ThetaComplex {
    theta_of(&boundary_collapse(p).unwrap().collapsed)
}

#[test]
fn line_couples_to_a_ten_cycle() {
    let t = theta_of(&fixtures::line());
    assert_eq!(t.cutoff, 2);
    assert_eq!(t.graph.edge_count(), 10);
    assert_eq!(t.graph.vertex_count(), 10);
    assert_eq!(t.euler_characteristic(), 0);
    let r = first_return_oracle(&t, DEFAULT_DEPTH).unwrap();
    eprintln!("{}", r.table());
    assert!(r.all_agree());
    assert!(certify_f(&t).unwrap().verdict);
    let pres = present_free_by_cyclic(&t).unwrap();
    eprintln!("{}", pres.text());
    assert_eq!(pres.rank, 1);
    assert_eq!(pres.monodromy.to_string().trim(), "x1 -> x1");
}

#[test]
fn fig1_pipeline_is_sound() {
    let t = collapsed_theta(&fixtures::fig1());
    let r = first_return_oracle(&t, DEFAULT_DEPTH).unwrap();
    eprintln!("{}", r.table());
    assert!(r.all_agree());
    assert!(certify_f(&t).unwrap().verdict);
    assert!(t.matches_constituents().unwrap());
    assert!(t.restricts_to_isomorphism(Side::Left));
    assert!(t.restricts_to_isomorphism(Side::Right));
    let pres = present_free_by_cyclic(&t).unwrap();
    eprintln!("{}", pres.text());
    assert!(pres.invertible);
}
