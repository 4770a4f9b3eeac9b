use std::f64::consts::PI;

use hyperiso_core::profile::{annuli_perimeter, annuli_volume, cap_perimeter, cap_volume};
use hyperiso_core::{AnnulusUnion, CapSymmetricProfile, DensitySpec, Profile};
use proptest::prelude::*;

fn ramp() -> DensitySpec {
    DensitySpec::new(&[(0.0, 0.0), (0.3, 0.0), (0.9, 2.0)]).unwrap()
}

fn positive() -> DensitySpec {
    DensitySpec::new(&[(0.0, 0.4), (0.5, 0.8), (0.8, 1.5)]).unwrap()
}

fn hyperbolic_profile(v: f64) -> f64 {
    (v * v + 4.0 * PI * v).sqrt()
}

#[test]
fn unweighted_identity_log_spaced() {
    let p = Profile::new(DensitySpec::unweighted()).unwrap();
    for k in 0..50 {
        let v = 0.01 * 5000f64.powf(k as f64 / 49.0);
        let i = p.profile_i(v).unwrap();
        let expected = hyperbolic_profile(v);
        assert!(((i - expected) / expected).abs() < 1e-8, "v = {v}");
    }
}

#[test]
fn low_volume_regime_matches_unweighted() {
    let p = Profile::new(ramp()).unwrap();
    let (r, v0) = p.uniqueness_thresholds().unwrap();
    assert_eq!(r, 0.3);
    for k in 1..=10 {
        let v = v0 * k as f64 / 10.0;
        let i = p.profile_i(v).unwrap();
        assert!(((i - hyperbolic_profile(v)) / i).abs() < 1e-8, "v = {v}");
    }
    let above = p.profile_i(2.0 * v0).unwrap();
    assert!(above > hyperbolic_profile(2.0 * v0));
}

#[test]
fn j_strictly_increasing() {
    for d in [DensitySpec::unweighted(), ramp(), positive()] {
        let p = Profile::new(d).unwrap();
        let top = p.max_scaled_volume();
        let mut prev = p.j(0.0).unwrap();
        for k in 1..=400 {
            let s = top * k as f64 / 401.0;
            let next = p.j(s).unwrap();
            assert!(next > prev, "J not increasing at {s}");
            prev = next;
        }
    }
}

#[test]
fn representable_sets_agree() {
    for d in [DensitySpec::unweighted(), ramp(), positive()] {
        let p = Profile::new(d).unwrap();
        for (inner, outer) in [(0.0, 0.4), (0.1, 0.6), (0.35, 0.9), (0.0, 0.95)] {
            let annulus = AnnulusUnion::new(vec![outer, inner]).unwrap();
            let cap = CapSymmetricProfile::new(vec![(inner, PI), (outer, PI)]).unwrap();
            let (va, vc) = (
                annuli_volume(&p, &annulus).unwrap(),
                cap_volume(&p, &cap).unwrap(),
            );
            let (pa, pc) = (
                annuli_perimeter(&p, &annulus),
                cap_perimeter(&p, &cap).unwrap(),
            );
            assert!((va - vc).abs() < 1e-8 * va.max(1.0), "{va} {vc}");
            assert!((pa - pc).abs() < 1e-8 * pa.max(1.0), "{pa} {pc}");
        }
    }
}

fn descending_tuple(max: f64) -> impl Strategy<Value = Vec<f64>> {
    (
        1usize..=4,
        proptest::collection::vec(0.0f64..1.0, 8),
        any::<bool>(),
    )
        .prop_map(move |(n, raw, zero)| {
            let mut t: Vec<f64> = raw[..2 * n].iter().map(|x| x * max).collect();
            t.sort_by(|a, b| b.total_cmp(a));
            if zero {
                *t.last_mut().unwrap() = 0.0;
            }
            t
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn alternating_sum(t in descending_tuple(1.0), which in 0usize..3) {
        let d = [DensitySpec::unweighted(), ramp(), positive()][which].clone();
        let p = Profile::new(d).unwrap();
        let scale = p.max_scaled_volume();
        let t: Vec<f64> = t.iter().map(|x| x * scale).collect();
        let lhs: f64 = t.iter().map(|&s| p.j(s).unwrap()).sum();
        let alt: f64 = t.iter().enumerate().map(|(h, s)| if h % 2 == 0 { *s } else { -s }).sum();
        prop_assert!(lhs >= p.j(alt).unwrap() - 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scaling_invariance(c in -2.0f64..2.0, frac in 0.001f64..0.9, which in 0usize..3) {
        let d = [DensitySpec::unweighted(), ramp(), positive()][which].clone();
        let old = Profile::new(d.clone()).unwrap();
        let new = Profile::new(d.with_log_scale(c).unwrap()).unwrap();
        let v = frac * old.max_volume();
        let lhs = new.profile_i(c.exp() * v).unwrap();
        let rhs = c.exp() * old.profile_i(v).unwrap();
        prop_assert!(((lhs - rhs) / rhs).abs() < 1e-8);
    }

    #[test]
    fn low_volume_identity_random_ramps(r in 0.05f64..0.8, top in 0.1f64..3.0, frac in 0.0f64..1.0) {
        let p = Profile::new(DensitySpec::new(&[(0.0, 0.0), (r, 0.0), (0.95, top)]).unwrap()).unwrap();
        let (_, v0) = p.uniqueness_thresholds().unwrap();
        let v = (frac * v0).max(1e-6);
        let i = p.profile_i(v).unwrap();
        prop_assert!(((i - hyperbolic_profile(v)) / i).abs() < 1e-8);
    }
}
