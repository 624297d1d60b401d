//! The diamond necklace: closed form, class-based evaluation and the full graph agree.

use mgt_core::families::{necklace, necklace_normalized, necklace_tau_formula};
use mgt_core::suite::necklace_by_classes;
use mgt_core::{int, ratio, tau, Scalar};
use proptest::prelude::*;

/// `(1/12) Σ L^3/(L+R)^2` straight from the edge profiles of the full graph.
fn cube_sum(g: &mgt_core::MetrizedGraph) -> Scalar {
    mgt_core::edge_profiles(g, 0).unwrap().iter().map(mgt_core::tau::cube_term).sum::<Scalar>() / int(12)
}

#[test]
fn single_diamond_ring() {
    // t = 1: one diamond with its poles joined by an edge of length a
    let (a, b) = (int(1), int(1));
    let g = necklace(&a, &b, 1);
    assert_eq!(tau(&g), necklace_tau_formula(&a, &b, 1));
}

#[test]
fn classes_match_full_graph() {
    for (a, b, t) in [(ratio(1, 3), ratio(1, 5), 2), (int(2), ratio(1, 7), 3), (ratio(1, 101), ratio(1, 50), 4)] {
        let g = necklace(&a, &b, t);
        let (t_classes, cube_classes) = necklace_by_classes(&a, &b, t).unwrap();
        assert_eq!(t_classes, tau(&g));
        assert_eq!(cube_classes, cube_sum(&g));
    }
}

#[test]
fn normalized_necklace_has_unit_length() {
    for t in [1, 3, 7] {
        let (b, g) = necklace_normalized(&ratio(1, 20), t);
        assert_eq!(g.total_length(), int(1));
        assert_eq!(b, (int(1) - ratio(t as i64, 20)) / int(5 * t as i64));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn closed_form_matches_edge_sum(an in 1i64..12, ad in 1i64..12, bn in 1i64..12, bd in 1i64..12, t in 1usize..5) {
        let (a, b) = (ratio(an, ad), ratio(bn, bd));
        let g = necklace(&a, &b, t);
        prop_assert_eq!(tau(&g), necklace_tau_formula(&a, &b, t));
    }
}
