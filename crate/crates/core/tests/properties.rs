use std::f64::consts::FRAC_1_SQRT_2;

use eurbound::bounds::{cached_cstar, transcendental_residual};
use eurbound::lp::saturation_overlap;
use eurbound::oracle::grid_min;
use eurbound::{
    deutsch_bound, entropy_sum_functional, f_bound, g_bound, h_m_value, lp_lhs,
    min_entropy_given_max, mu_bound, new_bound, saturating_partner, shannon_entropy, Overlap,
    ProbabilityVector,
};
use proptest::prelude::*;

fn ov(c: f64) -> Overlap {
    Overlap::new(c).unwrap()
}

/// A length-`n` distribution whose largest entry is exactly `p`.
fn with_max(p: f64, n: usize, weights: &[f64]) -> Option<ProbabilityVector> {
    let w = &weights[..n - 1];
    let total: f64 = w.iter().sum();
    if total <= 0.0 {
        return None;
    }
    let mut v = vec![p];
    v.extend(w.iter().map(|x| (1.0 - p) * x / total));
    if v[1..].iter().any(|&x| x > p) {
        return None;
    }
    ProbabilityVector::new(v).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn minimal_shape_beats_same_maximum(
        n in 2usize..8,
        t in 0.0f64..1.0,
        weights in prop::collection::vec(0.0f64..1.0, 7),
    ) {
        let p = 1.0 / n as f64 + t * (1.0 - 1.0 / n as f64);
        let q = with_max(p, n, &weights);
        prop_assume!(q.is_some());
        let prof = min_entropy_given_max(p, n).unwrap();
        prop_assert!(prof.entropy <= shannon_entropy(&q.unwrap()) + 1e-9);
    }

    #[test]
    fn closed_form_equals_explicit_shape(n in 1usize..12, t in 0.0f64..=1.0) {
        let p = 1.0 / n as f64 + t * (1.0 - 1.0 / n as f64);
        let prof = min_entropy_given_max(p, n).unwrap();
        prop_assert!((shannon_entropy(&prof.distribution()) - prof.entropy).abs() < 1e-12);
    }

    #[test]
    fn functional_is_symmetric(x in 1e-6f64..=1.0, y in 1e-6f64..=1.0) {
        prop_assert_eq!(
            entropy_sum_functional(x, y).unwrap(),
            entropy_sum_functional(y, x).unwrap()
        );
    }

    #[test]
    fn partner_is_an_involution(c in 0.01f64..=1.0, t in 0.0f64..=1.0) {
        let o = ov(c);
        let p_a = o.c_squared() + t * (1.0 - o.c_squared());
        let p_b = saturating_partner(p_a, o).unwrap();
        let back = saturating_partner(p_b, o).unwrap();
        prop_assert!((back - p_a).abs() < 1e-10);
    }

    #[test]
    fn partner_matches_closed_form(c in 0.01f64..0.999, t in 0.0f64..=1.0) {
        let o = ov(c);
        let p_a = o.c_squared() + t * (1.0 - o.c_squared());
        let p_b = saturating_partner(p_a, o).unwrap();
        prop_assert!((saturation_overlap(p_a, p_b) - c).abs() < 1e-10);
        prop_assert!((lp_lhs(p_a, p_b).unwrap() - o.theta()).abs() < 1e-10);
    }

    #[test]
    fn lp_lhs_decreases_in_each_argument(x in 0.01f64..0.99, y in 0.01f64..0.99) {
        let h = 1e-6;
        let base = lp_lhs(x, y).unwrap();
        prop_assert!(lp_lhs(x + h, y).unwrap() < base);
        prop_assert!(lp_lhs(x, y + h).unwrap() < base);
    }

    #[test]
    fn f_dominates_deutsch(c in 1e-6f64..=1.0) {
        prop_assert!(f_bound(ov(c)) >= deutsch_bound(ov(c)) - 1e-15);
    }

    #[test]
    fn f_is_the_symmetric_functional_value(c in 1e-6f64..1.0) {
        let p = (1.0 + c) / 2.0;
        prop_assert!((f_bound(ov(c)) - entropy_sum_functional(p, p).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn mu_dominates_deutsch(c in 1e-6f64..=1.0) {
        prop_assert!(mu_bound(ov(c)) >= deutsch_bound(ov(c)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bound_strictly_improves_above_threshold(t in 1e-4f64..0.9999) {
        let c = FRAC_1_SQRT_2 + t * (1.0 - FRAC_1_SQRT_2);
        let b = new_bound(ov(c)).unwrap();
        prop_assert!(b.final_bound - b.maassen_uffink > 1e-9);
        prop_assert!(b.final_bound >= b.deutsch);
    }

    #[test]
    fn g_is_never_the_strict_minimum(t in 1e-4f64..0.9999) {
        let c = FRAC_1_SQRT_2 + t * (1.0 - FRAC_1_SQRT_2);
        let o = ov(c);
        let g = g_bound(o);
        match h_m_value(o, 1).unwrap() {
            Some(h1) => prop_assert!(g >= h1 - 1e-9),
            None => prop_assert!(g >= f_bound(o) - 1e-9),
        }
    }

    #[test]
    fn final_is_max_of_mu_and_min_candidate(c in 0.05f64..=1.0) {
        let b = new_bound(ov(c)).unwrap();
        prop_assert!(b.final_bound >= b.maassen_uffink);
        if c < 1.0 {
            prop_assert!(b.final_bound > 0.0);
        }
        if c > FRAC_1_SQRT_2 {
            let expected = b.maassen_uffink.max(b.min_candidate());
            prop_assert!((b.final_bound - expected).abs() < 1e-12,
                "c = {}: final {} vs max(MU, min candidate) {}", c, b.final_bound, expected);
        } else {
            // the minimizer here can sit on P_A = 1/2, outside the tabulated
            // families, so only the piecewise rule is checked
            prop_assert_eq!(b.final_bound, b.maassen_uffink);
        }
    }
}

#[test]
fn g_interpolates_mu_at_inverse_square_roots() {
    for n in 1..=10 {
        let c = 1.0 / (n as f64).sqrt();
        assert!((g_bound(ov(c)) - mu_bound(ov(c))).abs() < 1e-12, "n = {n}");
    }
}

#[test]
fn cstar_matches_bifurcation_condition() {
    // At c* the asymmetric roots merge with the symmetric one: the residual's
    // alpha-derivative at alpha = theta/2 vanishes. Solve that by bisection.
    let slope = |c: f64| {
        let theta = c.acos();
        let h = 1e-7;
        transcendental_residual(theta / 2.0 + h, theta, 1) - transcendental_residual(theta / 2.0 - h, theta, 1)
    };
    let (mut lo, mut hi) = (0.75, 0.95);
    assert!(slope(lo) < 0.0 && slope(hi) > 0.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if slope(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // closed form of the same condition: c ln((1 + c)/(1 - c)) = 2
    let closed = |c: f64| c * ((1.0 + c) / (1.0 - c)).ln() - 2.0;
    assert!(closed(lo).abs() < 1e-6);
    assert!((lo - 0.833_556_559_6).abs() < 1e-6);

    let cstar = cached_cstar().unwrap();
    assert!((cstar - lo).abs() < 1e-6, "bisection {cstar} vs bifurcation {lo}");
}

#[test]
fn g_is_not_a_lower_bound_below_threshold() {
    for &(c, grid) in &[(0.5, 0.938_92), (0.6, 0.791_24), (0.7, 0.694_18)] {
        let o = ov(c);
        let r = grid_min(o, 10_000).unwrap();
        assert!((r.min_value - grid).abs() < 1e-4, "c = {c}: {}", r.min_value);
        assert!(r.min_value < g_bound(o) - 0.05);
        // the bound itself stays valid
        assert!(r.min_value <= new_bound(o).unwrap().final_bound + 1e-9);
    }
}
