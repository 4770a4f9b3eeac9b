//! Profile-level checks: the alternating-sum property of `J`, scaling
//! invariance and the low-volume identity.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::profile::Profile;
use crate::report::{Check, VerificationReport};

/// `Σ J(t_h) >= J(Σ (-1)^h t_h)` for `count` seeded descending tuples of
/// even length at most 8.
pub fn check_alternating_sum(
    p: &Profile,
    count: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = p.max_scaled_volume();
    let mut r = VerificationReport::new();
    for i in 0..count {
        let n = rng.gen_range(1..=4);
        let mut t: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(0.0..top)).collect();
        t.sort_by(|x, y| y.total_cmp(x));
        if rng.gen_bool(0.3) {
            t[2 * n - 1] = 0.0;
        }
        let lhs = t.iter().map(|&s| p.j(s)).sum::<Result<f64>>()?;
        let alt: f64 = t
            .iter()
            .enumerate()
            .map(|(h, &s)| if h % 2 == 0 { s } else { -s })
            .sum();
        r.push(Check::at_least(
            format!("alternating-sum[seed={seed}:{i}]"),
            lhs,
            p.j(alt)?,
            tol,
        ));
    }
    Ok(r)
}

/// `I_c(e^c v) = e^c I(v)` for the density shifted by `c` in `log ψ`,
/// compared relative to the right side.
pub fn check_scaling_invariance(
    p: &Profile,
    c: f64,
    volumes: &[f64],
    rel_tol: f64,
) -> Result<VerificationReport> {
    let shifted = Profile::with_t_max(
        p.density()
            .clone()
            .with_log_scale(p.density().log_scale() + c)?,
        p.t_max(),
    )?;
    let mut r = VerificationReport::new();
    for &v in volumes {
        let lhs = shifted.profile_i(c.exp() * v)?;
        let rhs = c.exp() * p.profile_i(v)?;
        r.push(Check::equal(
            format!("scaling[c={c}]@{v}"),
            lhs / rhs,
            1.0,
            rel_tol,
        ));
    }
    Ok(r)
}

/// `I(v)² = v² + 4πv` (relative) for `count` volumes up to `v₀`; for an
/// unweighted density, up to `v_cap`. Empty when `v₀ = 0`.
pub fn check_low_volume_identity(
    p: &Profile,
    count: usize,
    v_cap: f64,
    rel_tol: f64,
) -> Result<VerificationReport> {
    let (_, v0) = p.uniqueness_thresholds()?;
    let top = v0.min(v_cap).min(p.max_volume());
    let mut r = VerificationReport::new();
    if !(top > 0.0) {
        return Ok(r);
    }
    for k in 1..=count {
        let v = top * k as f64 / count as f64;
        let i = p.profile_i(v)?;
        let hyperbolic = (v * v + 4.0 * PI * v).sqrt();
        r.push(Check::equal(
            format!("low-volume@{v}"),
            i / hyperbolic,
            1.0,
            rel_tol,
        ));
    }
    Ok(r)
}
