//! Seeded random competitors of prescribed weighted volume.
//!
//! Annulus unions are drawn as sorted radii in `(0, 0.95)` and the outermost
//! radius is then moved to hit the volume. Cap profiles are drawn as monotone
//! piecewise-linear half-angles with at most six knots and then dilated
//! radially; volume is strictly increasing in the dilation factor because
//! `𝚏(s x)` increases with `s`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numerics::solve_monotone;
use crate::profile::{cap_volume, AnnulusUnion, CapSymmetricProfile, Competitor, Profile};

const DRAW_LIMIT: f64 = 0.95;
const MAX_CAP_KNOTS: usize = 6;
const MAX_ATTEMPTS: usize = 10_000;

pub struct CompetitorSampler {
    rng: ChaCha8Rng,
    max_annuli: usize,
}

impl CompetitorSampler {
    pub fn new(seed: u64, max_annuli: usize) -> Result<Self> {
        if max_annuli == 0 {
            return Err(Error::InvalidShape("max_annuli must be at least 1".into()));
        }
        Ok(CompetitorSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_annuli,
        })
    }

    fn sorted_uniform(&mut self, n: usize, hi: f64) -> Vec<f64> {
        let mut xs: Vec<f64> = (0..n).map(|_| self.rng.gen_range(1e-6..hi)).collect();
        xs.sort_by(f64::total_cmp);
        xs
    }

    /// An annulus union of weighted volume `v`.
    pub fn annuli(&mut self, p: &Profile, v: f64) -> Result<AnnulusUnion> {
        let scaled = v / (2.0 * PI);
        for _ in 0..MAX_ATTEMPTS {
            let n = self.rng.gen_range(1..=self.max_annuli);
            let mut radii = self.sorted_uniform(2 * n, DRAW_LIMIT);
            radii.reverse();
            if self.rng.gen_bool(0.25) {
                *radii.last_mut().expect("non-empty") = 0.0;
            }
            // a single disc is the centred ball, already the control row
            if n == 1 && radii[1] == 0.0 || radii.windows(2).any(|w| w[1] >= w[0]) {
                continue;
            }
            // F(a0) = v/2π + F(a1) - Σ_{h>=1} (F(a_{2h}) - F(a_{2h+1}))
            let mut rest = 0.0;
            for pair in radii[2..].chunks_exact(2) {
                rest += p.volume_f(pair[0])? - p.volume_f(pair[1])?;
            }
            if rest >= scaled {
                continue;
            }
            let outer_f = scaled + p.volume_f(radii[1])? - rest;
            if outer_f > p.max_scaled_volume() {
                continue;
            }
            radii[0] = p.f_inverse(outer_f)?;
            if radii[0] <= radii[1] {
                continue;
            }
            return AnnulusUnion::new(radii);
        }
        Err(Error::InvalidShape(format!(
            "no annulus union of volume {v} found in {MAX_ATTEMPTS} draws"
        )))
    }

    /// A cap-symmetric profile of weighted volume `v`.
    pub fn cap(&mut self, p: &Profile, v: f64) -> Result<CapSymmetricProfile> {
        for _ in 0..MAX_ATTEMPTS {
            let knots = self.rng.gen_range(2..=MAX_CAP_KNOTS);
            let mut taus = self.sorted_uniform(knots, DRAW_LIMIT);
            if self.rng.gen_bool(0.5) {
                taus[0] = 0.0;
            }
            let mut alphas: Vec<f64> = (0..knots).map(|_| self.rng.gen_range(0.0..=PI)).collect();
            alphas.sort_by(f64::total_cmp);
            if self.rng.gen_bool(0.5) {
                alphas.reverse();
                if self.rng.gen_bool(0.5) {
                    alphas[0] = PI;
                }
            }
            if taus.windows(2).any(|w| w[1] <= w[0]) || alphas.iter().all(|&a| a == 0.0) {
                continue;
            }
            let shape = CapSymmetricProfile::new(taus.iter().copied().zip(alphas).collect())?;
            let max_factor = p.t_max() / taus[knots - 1];
            let volume_at =
                |s: f64| cap_volume(p, &shape.dilate(s).expect("dilation stays in the disc"));
            if volume_at(max_factor)? < v {
                continue;
            }
            let factor = solve_monotone(
                |s| volume_at(s).unwrap_or(f64::NAN),
                v,
                (1e-9, max_factor),
                1e-12 * (1.0 + v),
            )?;
            return shape.dilate(factor);
        }
        Err(Error::InvalidShape(format!(
            "no cap profile of volume {v} found in {MAX_ATTEMPTS} draws"
        )))
    }
}

/// The centred ball of volume `v` followed by `trials` random competitors,
/// alternating annulus unions and cap profiles. Deterministic in `seed`.
pub fn competitor_sweep(
    p: &Profile,
    v: f64,
    trials: usize,
    max_annuli: usize,
    seed: u64,
) -> Result<Vec<Competitor>> {
    let mut sampler = CompetitorSampler::new(seed, max_annuli)?;
    let mut out = Vec::with_capacity(trials + 1);
    out.push(Competitor::Annuli(AnnulusUnion::ball(
        p.ball_radius_for_volume(v)?,
    )?));
    for i in 0..trials {
        let c = if i % 2 == 0 {
            Competitor::Annuli(sampler.annuli(p, v)?)
        } else {
            Competitor::Cap(sampler.cap(p, v)?)
        };
        out.push(c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::DensitySpec;
    use crate::profile::{annuli_volume, verify_ball_minimality};

    #[test]
    fn sampled_competitors_hit_volume() {
        let p = Profile::new(DensitySpec::unweighted()).unwrap();
        let v = 3.4695;
        let mut s = CompetitorSampler::new(7, 4).unwrap();
        for _ in 0..10 {
            let a = s.annuli(&p, v).unwrap();
            assert!((annuli_volume(&p, &a).unwrap() - v).abs() < 1e-9 * (1.0 + v));
            let c = s.cap(&p, v).unwrap();
            assert!((cap_volume(&p, &c).unwrap() - v).abs() < 1e-9 * (1.0 + v));
        }
    }

    #[test]
    fn sweep_is_deterministic() {
        let p =
            Profile::new(DensitySpec::new(&[(0.0, 0.0), (0.3, 0.0), (0.9, 2.0)]).unwrap()).unwrap();
        let a = competitor_sweep(&p, 2.0, 12, 3, 42).unwrap();
        let b = competitor_sweep(&p, 2.0, 12, 3, 42).unwrap();
        assert_eq!(a, b);
        let c = competitor_sweep(&p, 2.0, 12, 3, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn unweighted_sweep_passes() {
        let p = Profile::new(DensitySpec::unweighted()).unwrap();
        let v = 3.4695;
        let comps = competitor_sweep(&p, v, 200, 4, 42).unwrap();
        let report = verify_ball_minimality(&p, v, &comps, 1e-8).unwrap();
        assert!(report.all_passed());
        assert!(report.checks[0].slack.abs() <= 1e-8);
        for check in &report.checks[1..] {
            assert!(check.slack > 0.0, "{check:?}");
        }
    }

    #[test]
    fn zero_annuli_rejected() {
        assert!(CompetitorSampler::new(1, 0).is_err());
    }
}
