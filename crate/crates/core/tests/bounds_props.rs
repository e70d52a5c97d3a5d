use proptest::prelude::*;
use tiltperc::bounds::{bounds_report, lb_general, theta_constant, ub_expected_t, ub_factorial, ShellGeometry};
use tiltperc::Alpha;

#[test]
fn exact_bounds_are_sandwiched() {
    for (n, m) in [(0, 1), (1, 4), (1, 2), (3, 4)] {
        let a = Alpha::new(n, m).unwrap();
        for d in 1..=4 {
            for k in 0..=d {
                let r = bounds_report(a, d, k).unwrap();
                assert!(
                    r.sandwich_holds(),
                    "alpha={a} d={d} k={k}: {} > {}",
                    r.max_exact_lower(),
                    r.min_exact_upper()
                );
                assert!(r.max_exact_lower() > 0.0 && r.min_exact_upper() <= 1.0);
            }
        }
    }
}

#[test]
fn general_bound_has_the_dimension_exponent() {
    // slope between decades, so the constant prefactor drops out
    for a in [0.0, 0.25, 0.5, 0.75] {
        let want = -1.0 / (1.0 - a);
        for d in [10usize, 100, 1000] {
            let slope = (lb_general(a, 10 * d).unwrap() / lb_general(a, d).unwrap()).log10();
            assert!((slope / want - 1.0).abs() < 0.05, "alpha={a} d={d}: {slope} vs {want}");
        }
        let gaps: Vec<f64> = [10.0f64, 1e2, 1e3, 1e4]
            .iter()
            .map(|&d| (lb_general(a, d as usize).unwrap().ln() / d.ln() - want).abs())
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "alpha={a}: {gaps:?}");
    }
}

#[test]
fn shell_bound_never_exceeds_factorial_bound() {
    for a in [0.0, 0.25, 0.5, 0.75] {
        for d in 1..=4 {
            assert!(ub_expected_t(a, d).unwrap() <= ub_factorial(a, d).unwrap().value + 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn theta_root_is_tight(rho in 0.01f64..1.0) {
        let t = theta_constant(rho).unwrap();
        prop_assert!(t.residual < 1e-12);
    }

    #[test]
    fn radius_inverts_ball_size(d in 1usize..=4, i in 0u128..100_000) {
        let g = ShellGeometry::new(d).unwrap();
        let r = g.radius_of(i);
        prop_assert!(i < g.ball_size(r).unwrap());
        if r > 0 {
            prop_assert!(i >= g.ball_size(r - 1).unwrap());
        }
    }
}
