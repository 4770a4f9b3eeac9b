use std::f64::consts::PI;

use hyperiso_core::comparison::{
    check_mu_comparison_linear, check_riccati_comparison, closed_form_u0, interior_levels,
    LevelSets,
};
use hyperiso_core::curvature_ode::{
    m_functional, m_hat_functional, reconstruct_curve, solve_bvp_a_zero, solve_linear_bvp,
    solve_riccati, DEFAULT_THETA_START,
};
use hyperiso_core::{DensitySpec, Error, Eta};
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = DensitySpec> {
    (
        proptest::collection::vec(0.0f64..0.95, 1..4),
        proptest::collection::vec(0.0f64..1.0, 4),
        prop_oneof![Just(0.0), 0.0f64..0.5],
    )
        .prop_map(|(mut radii, steps, base)| {
            radii.sort_by(f64::total_cmp);
            radii.dedup();
            let mut value = base;
            let nodes: Vec<(f64, f64)> = radii
                .iter()
                .zip(steps)
                .enumerate()
                .map(|(i, (&r, s))| {
                    if i > 0 {
                        value += s;
                    }
                    (r, value)
                })
                .collect();
            DensitySpec::new(&nodes).unwrap()
        })
}

fn interval_strategy() -> impl Strategy<Value = (f64, f64)> {
    (0.01f64..0.9, 0.02f64..0.5).prop_map(|(a, len)| (a, (a + len).min(0.95)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multipliers_positive(d in spec_strategy(), (a, b) in interval_strategy()) {
        prop_assert!(m_functional(&d, a, b).unwrap() > 0.0);
        prop_assert!(m_hat_functional(&d, a, b).unwrap() > 0.0);
        prop_assert!(m_hat_functional(&d, 0.0, b).unwrap() > 0.0);
    }

    #[test]
    fn plus_minus_has_one_zero(d in spec_strategy(), (a, b) in interval_strategy()) {
        let sol = solve_linear_bvp(&d, a, b, Eta::PLUS_MINUS).unwrap();
        prop_assert_eq!(sol.sign_changes(), 1);
    }

    #[test]
    fn riccati_duality(d in spec_strategy(), (a, b) in interval_strategy()) {
        let ric = solve_riccati(&d, a, b).unwrap();
        for (w, u) in ric.values().iter().zip(ric.linear().values()) {
            prop_assert!((w * u - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn a_zero_dominates_unweighted(d in spec_strategy(), b in 0.05f64..0.95) {
        let sol = solve_bvp_a_zero(&d, b).unwrap();
        let flat = d.vanishes_on(0.0, b);
        for (&t, &u) in sol.grid().iter().zip(sol.values()).skip(1) {
            if t < b * (1.0 - 1e-6) {
                if flat {
                    prop_assert!((u - t / b).abs() < 1e-10);
                } else {
                    prop_assert!(u > t / b, "u({}) = {} <= {}", t, u, t / b);
                }
            }
        }
    }

    #[test]
    fn linear_mu_comparison_holds(d in spec_strategy(), (a, b) in interval_strategy()) {
        let sol = solve_linear_bvp(&d, a, b, Eta::PLUS_MINUS).unwrap();
        match check_mu_comparison_linear(&sol, &interior_levels(0.0, 1.0, 30), 2e-6) {
            Ok(r) => {
                let failures: Vec<_> = r.failures().collect();
                prop_assert!(failures.is_empty(), "{:?}", failures);
            }
            Err(Error::HypothesisViolated(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn riccati_comparison_holds(d in spec_strategy(), (a, b) in interval_strategy()) {
        let ric = solve_riccati(&d, a, b).unwrap();
        let top = 0.5 * (a + b) / (a * b).sqrt();
        match check_riccati_comparison(&ric, &interior_levels(1.0, top, 30), 2e-6) {
            Ok(r) => {
                let failures: Vec<_> = r.failures().collect();
                prop_assert!(failures.is_empty(), "{:?}", failures);
            }
            Err(Error::HypothesisViolated(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}

#[test]
fn unweighted_u0_matches_closed_form() {
    let d = DensitySpec::unweighted();
    for (a, b) in [(0.1, 0.2), (0.2, 0.5), (0.05, 0.9)] {
        let sol = solve_linear_bvp(&d, a, b, Eta::PLUS_MINUS).unwrap();
        for (&t, &u) in sol.grid().iter().zip(sol.values()) {
            assert!((u - closed_form_u0(a, b, t).unwrap()).abs() < 1e-10);
        }
        let sets = LevelSets::new(&sol).unwrap();
        assert_eq!(sets.piece_count(), 1);
    }
}

#[test]
fn winding_identities() {
    let d = DensitySpec::unweighted();
    for (a, b) in [(0.05, 0.1), (0.3, 0.8), (0.01, 0.94)] {
        let sol = solve_linear_bvp(&d, a, b, Eta::PLUS_PLUS).unwrap();
        let c = reconstruct_curve(&sol, DEFAULT_THETA_START).unwrap();
        assert!((c.winding.abs() - PI).abs() < 1e-8);
        let m = solve_linear_bvp(&d, a, b, Eta::MINUS_MINUS).unwrap();
        let cm = reconstruct_curve(&m, DEFAULT_THETA_START).unwrap();
        assert!((cm.winding + c.winding).abs() < 1e-10);
    }
}
