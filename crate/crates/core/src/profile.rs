//! Weighted volume and perimeter of centred balls, annulus unions and
//! cap-symmetric sets, the isoperimetric profile, and the ball-minimality
//! verifier.
//!
//! Weighted volume uses the density `f = ζ²ψ` and weighted perimeter uses
//! `g = ζψ`. For radial sets everything reduces to the one-dimensional
//! functions `𝚏(t) = t ζ²ψ`, `𝚐(t) = t ζψ` and the primitive
//! `F(t) = ∫₀ᵗ 𝚏`. The profile is `I(v) = 2π J(v / 2π)` with `J = 𝚐 ∘ F⁻¹`.

use std::f64::consts::PI;

use crate::density::{log_conformal_step, zeta_at, DensitySpec};
use crate::error::{ensure_radius, Error, Result};
use crate::numerics::{integrate_with_breaks, solve_monotone, SingularityHint};
use crate::report::{Check, VerificationReport};

/// Largest radius for which the profile is tabulated.
pub const DEFAULT_T_MAX: f64 = 0.999;

const PRIMITIVE_TOL: f64 = 1e-13;

#[inline]
pub(crate) fn little_f_at(d: &DensitySpec, t: f64) -> f64 {
    let z = zeta_at(t);
    t * z * z * d.psi_at(t)
}

#[inline]
pub(crate) fn little_g_at(d: &DensitySpec, t: f64) -> f64 {
    t * zeta_at(t) * d.psi_at(t)
}

/// `𝚏(t) = t ζ(t)² ψ(t)`.
pub fn little_f(d: &DensitySpec, t: f64) -> Result<f64> {
    ensure_radius("t", t)?;
    Ok(little_f_at(d, t))
}

/// `𝚐(t) = t ζ(t) ψ(t)`.
pub fn little_g(d: &DensitySpec, t: f64) -> Result<f64> {
    ensure_radius("t", t)?;
    Ok(little_g_at(d, t))
}

/// `log 𝚐(y) - log 𝚐(x)` for `0 < x, y < 1` without cancellation.
pub(crate) fn log_g_increment(d: &DensitySpec, x: f64, y: f64) -> f64 {
    log_g_step(d, x, y - x)
}

/// `log 𝚐(x + dx) - log 𝚐(x)` with the offset supplied exactly.
pub(crate) fn log_g_step(d: &DensitySpec, x: f64, dx: f64) -> f64 {
    let y = x + dx;
    (dx / x).ln_1p() + log_conformal_step(x, y, dx) + d.h_step(x, dx)
}

/// `∫_x^y 𝚏` by adaptive quadrature with the density kinks as breakpoints.
pub(crate) fn integrate_little_f(d: &DensitySpec, x: f64, y: f64) -> Result<f64> {
    if y <= x {
        return Ok(0.0);
    }
    Ok(integrate_with_breaks(
        |t| little_f_at(d, t),
        x,
        y,
        d.breakpoints(),
        SingularityHint::NONE,
        PRIMITIVE_TOL,
    )?
    .value)
}

/// Cumulative integral of `𝚏` on `[lo, hi]`, cached on a fixed set of knots
/// so that each evaluation only integrates over one short piece.
#[derive(Debug, Clone)]
pub(crate) struct Primitive {
    knots: Vec<f64>,
    cumulative: Vec<f64>,
}

impl Primitive {
    pub(crate) fn new(d: &DensitySpec, lo: f64, hi: f64, pieces: usize) -> Result<Self> {
        let mut knots: Vec<f64> = (0..=pieces)
            .map(|i| lo + (hi - lo) * i as f64 / pieces as f64)
            .collect();
        knots.extend(
            d.breakpoints()
                .iter()
                .copied()
                .filter(|&t| t > lo && t < hi),
        );
        // ζ² grows like (1 - t)^-2; refine geometrically towards the boundary
        let mut k = 1;
        loop {
            let t = 1.0 - 0.5f64.powi(k);
            if t >= hi {
                break;
            }
            if t > lo {
                knots.push(t);
            }
            k += 1;
        }
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        let mut cumulative = Vec::with_capacity(knots.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for w in knots.windows(2) {
            acc += integrate_little_f(d, w[0], w[1])?;
            cumulative.push(acc);
        }
        Ok(Primitive { knots, cumulative })
    }

    #[inline]
    fn lo(&self) -> f64 {
        self.knots[0]
    }

    #[inline]
    fn hi(&self) -> f64 {
        *self.knots.last().expect("non-empty")
    }

    pub(crate) fn total(&self) -> f64 {
        *self.cumulative.last().expect("non-empty")
    }

    #[inline]
    fn segment(&self, t: f64) -> usize {
        self.knots
            .partition_point(|&k| k <= t)
            .saturating_sub(1)
            .min(self.knots.len() - 2)
    }

    /// `∫_lo^t 𝚏`; `t` may lie beyond `hi` (but below 1).
    pub(crate) fn eval(&self, d: &DensitySpec, t: f64) -> Result<f64> {
        if t <= self.lo() {
            return Ok(0.0);
        }
        if t >= self.hi() {
            return Ok(self.total() + integrate_little_f(d, self.hi(), t)?);
        }
        let k = self.segment(t);
        Ok(self.cumulative[k] + integrate_little_f(d, self.knots[k], t)?)
    }

    /// `∫_t^hi 𝚏` for `t` in `[lo, hi]`.
    pub(crate) fn tail(&self, d: &DensitySpec, t: f64) -> Result<f64> {
        if t >= self.hi() {
            return Ok(0.0);
        }
        let t = t.max(self.lo());
        let k = self.segment(t);
        let head = integrate_little_f(d, t, self.knots[k + 1])?;
        Ok(head + (self.total() - self.cumulative[k + 1]))
    }

    /// Inverse of [`Primitive::eval`] on `[lo, hi]`.
    pub(crate) fn invert(&self, d: &DensitySpec, s: f64) -> Result<f64> {
        if s <= 0.0 {
            return Ok(self.lo());
        }
        let k = self
            .cumulative
            .partition_point(|&c| c <= s)
            .clamp(1, self.knots.len() - 1);
        let (x0, x1) = (self.knots[k - 1], self.knots[k]);
        let base = self.cumulative[k - 1];
        let tol = 1e-14 * s.max(1.0);
        solve_monotone(
            |x| base + integrate_little_f(d, x0, x).unwrap_or(f64::NAN),
            s,
            (x0, x1),
            tol,
        )
    }
}

/// The weighted isoperimetric profile of a density, with `F` cached up to a
/// configured radius `t_max < 1`.
#[derive(Debug, Clone)]
pub struct Profile {
    density: DensitySpec,
    t_max: f64,
    primitive: Primitive,
}

impl Profile {
    pub fn new(density: DensitySpec) -> Result<Self> {
        Self::with_t_max(density, DEFAULT_T_MAX)
    }

    pub fn with_t_max(density: DensitySpec, t_max: f64) -> Result<Self> {
        ensure_radius("t_max", t_max)?;
        if t_max <= 0.0 {
            return Err(Error::Domain {
                what: "t_max",
                value: t_max,
                expected: "(0, 1)",
            });
        }
        let primitive = Primitive::new(&density, 0.0, t_max, 64)?;
        Ok(Profile {
            density,
            t_max,
            primitive,
        })
    }

    pub fn density(&self) -> &DensitySpec {
        &self.density
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// `F(t) = ∫₀ᵗ 𝚏`.
    pub fn volume_f(&self, t: f64) -> Result<f64> {
        ensure_radius("t", t)?;
        self.primitive.eval(&self.density, t)
    }

    /// Largest scaled volume `F(t_max)` the profile can invert.
    pub fn max_scaled_volume(&self) -> f64 {
        self.primitive.total()
    }

    /// Largest weighted volume `2π F(t_max)`.
    pub fn max_volume(&self) -> f64 {
        2.0 * PI * self.max_scaled_volume()
    }

    pub fn f_inverse(&self, s: f64) -> Result<f64> {
        if !(s.is_finite() && s >= 0.0) {
            return Err(Error::Domain {
                what: "s",
                value: s,
                expected: "[0, F(t_max)]",
            });
        }
        let max = self.max_scaled_volume();
        if s > max {
            return Err(Error::Range {
                what: "scaled volume",
                value: s,
                max,
            });
        }
        self.primitive.invert(&self.density, s)
    }

    /// `J(s) = 𝚐(F⁻¹(s))`.
    pub fn j(&self, s: f64) -> Result<f64> {
        Ok(little_g_at(&self.density, self.f_inverse(s)?))
    }

    /// Radius of the centred ball of weighted volume `v`.
    pub fn ball_radius_for_volume(&self, v: f64) -> Result<f64> {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::Domain {
                what: "v",
                value: v,
                expected: ">= 0",
            });
        }
        if v > self.max_volume() {
            return Err(Error::Range {
                what: "volume",
                value: v,
                max: self.max_volume(),
            });
        }
        self.f_inverse(v / (2.0 * PI))
    }

    /// `I(v) = 2π J(v / 2π)`, the weighted perimeter of the centred ball of
    /// weighted volume `v`.
    pub fn profile_i(&self, v: f64) -> Result<f64> {
        let r = self.ball_radius_for_volume(v)?;
        Ok(2.0 * PI * little_g_at(&self.density, r))
    }

    /// `(R, v₀)` with `R = inf{ϱ > 0}` and `v₀ = 2π F(R)`; `v₀ = ∞` when the
    /// density is unweighted.
    pub fn uniqueness_thresholds(&self) -> Result<(f64, f64)> {
        let r = self.density.first_positive_radius();
        if r >= 1.0 {
            return Ok((1.0, f64::INFINITY));
        }
        Ok((r, 2.0 * PI * self.volume_f(r)?))
    }
}

/// A finite union of disjoint centred annuli `⋃ A((a_{2h+1}, a_{2h}))`
/// given by strictly decreasing radii.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnulusUnion {
    radii: Vec<f64>,
}

impl AnnulusUnion {
    pub fn new(radii: Vec<f64>) -> Result<Self> {
        if radii.is_empty() || radii.len() % 2 != 0 {
            return Err(Error::InvalidShape(format!(
                "annulus union needs an even, non-zero number of radii (got {})",
                radii.len()
            )));
        }
        for &r in &radii {
            ensure_radius("radius", r)?;
        }
        if radii.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidShape(
                "radii must be strictly decreasing".into(),
            ));
        }
        Ok(AnnulusUnion { radii })
    }

    /// The centred ball `B(0, r)`.
    pub fn ball(r: f64) -> Result<Self> {
        Self::new(vec![r, 0.0])
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }
}

/// `2π Σ (F(a_{2h}) - F(a_{2h+1}))`.
pub fn annuli_volume(p: &Profile, set: &AnnulusUnion) -> Result<f64> {
    let mut acc = 0.0;
    for pair in set.radii.chunks_exact(2) {
        acc += p.volume_f(pair[0])? - p.volume_f(pair[1])?;
    }
    Ok(2.0 * PI * acc)
}

/// `2π Σ 𝚐(a_h)`.
pub fn annuli_perimeter(p: &Profile, set: &AnnulusUnion) -> f64 {
    2.0 * PI
        * set
            .radii
            .iter()
            .map(|&r| little_g_at(&p.density, r))
            .sum::<f64>()
}

/// A cap-symmetric set `⋃ C(τ, α(τ))`: at radius `τ` the set is the arc of
/// half-angle `α(τ)` centred on the positive x-axis. `α` is piecewise linear
/// between samples and zero outside `[τ_first, τ_last]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CapSymmetricProfile {
    samples: Vec<(f64, f64)>,
}

impl CapSymmetricProfile {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidShape(
                "a cap profile needs at least two samples".into(),
            ));
        }
        for &(tau, alpha) in &samples {
            ensure_radius("tau", tau)?;
            if !(0.0..=PI).contains(&alpha) {
                return Err(Error::Domain {
                    what: "alpha",
                    value: alpha,
                    expected: "[0, pi]",
                });
            }
        }
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidShape(
                "tau must be strictly increasing".into(),
            ));
        }
        Ok(CapSymmetricProfile { samples })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    /// Section measure `L(τ) = 2 α(τ) τ`.
    pub fn section_length(&self, tau: f64) -> f64 {
        2.0 * self.alpha(tau) * tau
    }

    pub fn alpha(&self, tau: f64) -> f64 {
        let s = &self.samples;
        if tau < s[0].0 || tau > s[s.len() - 1].0 {
            return 0.0;
        }
        let k = s.partition_point(|p| p.0 <= tau).clamp(1, s.len() - 1);
        let (t0, a0) = s[k - 1];
        let (t1, a1) = s[k];
        a0 + (a1 - a0) * (tau - t0) / (t1 - t0)
    }

    /// The profile with every radius multiplied by `factor`.
    pub fn dilate(&self, factor: f64) -> Result<Self> {
        Self::new(self.samples.iter().map(|&(t, a)| (t * factor, a)).collect())
    }
}

/// `2 ∫ α 𝚏 dτ`.
pub fn cap_volume(p: &Profile, cap: &CapSymmetricProfile) -> Result<f64> {
    let d = &p.density;
    let mut acc = 0.0;
    for w in cap.samples.windows(2) {
        let ((t0, a0), (t1, a1)) = (w[0], w[1]);
        if a0 == 0.0 && a1 == 0.0 {
            continue;
        }
        let slope = (a1 - a0) / (t1 - t0);
        let r = integrate_with_breaks(
            |t| (a0 + slope * (t - t0)) * little_f_at(d, t),
            t0,
            t1,
            d.breakpoints(),
            SingularityHint::NONE,
            PRIMITIVE_TOL,
        )?;
        acc += r.value;
    }
    Ok(2.0 * acc)
}

/// Weighted length of the boundary: the two symmetric curves `θ = ±α(τ)` where
/// `0 < α < π`, plus circular arcs where the profile starts or stops.
pub fn cap_perimeter(p: &Profile, cap: &CapSymmetricProfile) -> Result<f64> {
    let d = &p.density;
    let s = &cap.samples;
    let mut acc = 0.0;
    for w in s.windows(2) {
        let ((t0, a0), (t1, a1)) = (w[0], w[1]);
        if a0 == a1 && (a0 == 0.0 || a0 == PI) {
            continue;
        }
        let slope = (a1 - a0) / (t1 - t0);
        let r = integrate_with_breaks(
            |t| zeta_at(t) * d.psi_at(t) * (1.0 + (t * slope).powi(2)).sqrt(),
            t0,
            t1,
            d.breakpoints(),
            SingularityHint::NONE,
            PRIMITIVE_TOL,
        )?;
        acc += 2.0 * r.value;
    }
    let (first, last) = (s[0], s[s.len() - 1]);
    acc += 2.0 * first.1 * little_g_at(d, first.0);
    acc += 2.0 * last.1 * little_g_at(d, last.0);
    Ok(acc)
}

/// A set competing with the centred ball.
#[derive(Debug, Clone, PartialEq)]
pub enum Competitor {
    Annuli(AnnulusUnion),
    Cap(CapSymmetricProfile),
}

impl Competitor {
    pub fn volume(&self, p: &Profile) -> Result<f64> {
        match self {
            Competitor::Annuli(a) => annuli_volume(p, a),
            Competitor::Cap(c) => cap_volume(p, c),
        }
    }

    pub fn perimeter(&self, p: &Profile) -> Result<f64> {
        match self {
            Competitor::Annuli(a) => Ok(annuli_perimeter(p, a)),
            Competitor::Cap(c) => cap_perimeter(p, c),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Competitor::Annuli(_) => "annuli",
            Competitor::Cap(_) => "cap",
        }
    }
}

/// Compares every competitor's weighted perimeter with `I(v)`.
///
/// Competitors must already have weighted volume within `tol (1 + v)` of `v`.
pub fn verify_ball_minimality(
    p: &Profile,
    v: f64,
    competitors: &[Competitor],
    tol: f64,
) -> Result<VerificationReport> {
    let profile_value = p.profile_i(v)?;
    let mut report = VerificationReport::new();
    for (i, c) in competitors.iter().enumerate() {
        let volume = c.volume(p)?;
        if (volume - v).abs() > tol * (1.0 + v) {
            return Err(Error::VolumeMismatch {
                index: i,
                volume,
                expected: v,
            });
        }
        let perimeter = c.perimeter(p)?;
        report.push(Check::at_least(
            format!("ball-minimality[{i}:{}]", c.kind()),
            perimeter,
            profile_value,
            tol,
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{zeta, DensitySpec};

    fn flat() -> Profile {
        Profile::new(DensitySpec::unweighted()).unwrap()
    }

    fn ramp() -> Profile {
        Profile::new(DensitySpec::new(&[(0.0, 0.0), (0.3, 0.0), (0.9, 2.0)]).unwrap()).unwrap()
    }

    #[test]
    fn little_f_and_g() {
        let d = DensitySpec::unweighted();
        assert!((little_g(&d, 0.5).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(
            little_g(&DensitySpec::constant(1.0).unwrap(), 0.0).unwrap(),
            0.0
        );
        assert!((little_f(&d, 0.2).unwrap() - 0.8680555555555556).abs() < 1e-15);
        assert!(little_f(&d, 1.0).is_err());
    }

    #[test]
    fn f_and_inverse_unweighted() {
        let p = flat();
        assert_eq!(p.volume_f(0.0).unwrap(), 0.0);
        assert!((p.volume_f(0.5).unwrap() - 2.0 / 3.0).abs() < 1e-13);
        assert!((p.f_inverse(2.0 / 3.0).unwrap() - 0.5).abs() < 1e-13);
        assert!(matches!(p.f_inverse(1e6), Err(Error::Range { .. })));
        // past t_max is still computable for F itself
        assert!((p.volume_f(0.9995).unwrap() - (zeta(0.9995).unwrap() - 2.0)).abs() < 1e-8);
    }

    #[test]
    fn j_closed_form_unweighted() {
        let p = flat();
        assert_eq!(p.j(0.0).unwrap(), 0.0);
        assert!((p.j(2.0 / 3.0).unwrap() - 4.0 / 3.0).abs() < 1e-12);
        assert!((p.j(1.0).unwrap() - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn profile_unweighted_values() {
        let p = flat();
        assert!((p.profile_i(4.0 * PI / 3.0).unwrap() - 8.0 * PI / 3.0).abs() < 1e-11);
        assert!((p.profile_i(4.0 * PI).unwrap() - 17.771531752633465).abs() < 1e-10);
        let v = 1e-6;
        let ratio = p.profile_i(v).unwrap() / (4.0 * PI * v).sqrt();
        assert!((ratio - 1.0).abs() < 1e-3);
    }

    #[test]
    fn ball_radius() {
        let p = flat();
        assert!((p.ball_radius_for_volume(4.0 * PI / 3.0).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(p.ball_radius_for_volume(0.0).unwrap(), 0.0);
        assert!((p.ball_radius_for_volume(2.0 * PI).unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!(p.ball_radius_for_volume(-1.0).is_err());
    }

    #[test]
    fn ramp_profile_against_mpmath() {
        // F(0.5), F(0.7) and 2π𝚐 from 30-digit quadrature of the same density
        let p = ramp();
        assert!((p.volume_f(0.5).unwrap() - 0.699018919986038858).abs() < 1e-12);
        assert!((p.volume_f(0.7).unwrap() - 2.791109624639907480).abs() < 1e-11);
        let v = 17.537058984264997389;
        assert!((p.profile_i(v).unwrap() - 38.948681550693070401).abs() < 1e-9);
    }

    #[test]
    fn annuli_example() {
        let p = flat();
        let set = AnnulusUnion::new(vec![0.5, 0.3, 0.2, 0.0]).unwrap();
        let v = annuli_volume(&p, &set).unwrap();
        assert!((v - 3.469561117426090).abs() < 1e-11);
        assert!((annuli_perimeter(&p, &set) - 15.138333830759608).abs() < 1e-11);
    }

    #[test]
    fn ball_consistency() {
        let p = ramp();
        for r in [0.1, 0.45, 0.8] {
            let ball = AnnulusUnion::ball(r).unwrap();
            let v = annuli_volume(&p, &ball).unwrap();
            let per = annuli_perimeter(&p, &ball);
            assert!((per - p.profile_i(v).unwrap()).abs() < 1e-9 * per);
        }
    }

    #[test]
    fn annulus_union_validation() {
        assert!(AnnulusUnion::new(vec![0.5]).is_err());
        assert!(AnnulusUnion::new(vec![0.3, 0.5]).is_err());
        assert!(AnnulusUnion::new(vec![1.0, 0.5]).is_err());
        assert!(AnnulusUnion::new(vec![]).is_err());
    }

    #[test]
    fn cap_annulus_matches_annuli() {
        let p = flat();
        let cap = CapSymmetricProfile::new(vec![(0.2, PI), (0.5, PI)]).unwrap();
        assert!((cap_volume(&p, &cap).unwrap() - 3.665191429188090).abs() < 1e-11);
        assert!((cap_perimeter(&p, &cap).unwrap() - 10.995574287564276).abs() < 1e-11);
        let set = AnnulusUnion::new(vec![0.5, 0.2]).unwrap();
        assert!((cap_volume(&p, &cap).unwrap() - annuli_volume(&p, &set).unwrap()).abs() < 1e-8);
        assert!((cap_perimeter(&p, &cap).unwrap() - annuli_perimeter(&p, &set)).abs() < 1e-8);
    }

    #[test]
    fn empty_cap() {
        let p = flat();
        let cap = CapSymmetricProfile::new(vec![(0.1, 0.0), (0.6, 0.0)]).unwrap();
        assert_eq!(cap_volume(&p, &cap).unwrap(), 0.0);
        assert_eq!(cap_perimeter(&p, &cap).unwrap(), 0.0);
    }

    #[test]
    fn linear_cap_above_profile() {
        let p = flat();
        let cap = CapSymmetricProfile::new(vec![(0.0, PI), (0.5, 0.0)]).unwrap();
        let v = cap_volume(&p, &cap).unwrap();
        let per = cap_perimeter(&p, &cap).unwrap();
        assert!((v - 1.2391985665336377).abs() < 1e-11);
        assert!((per - 4.405508322788823).abs() < 1e-11);
        assert!(per >= p.profile_i(v).unwrap() - 1e-8);
    }

    #[test]
    fn cap_validation() {
        assert!(CapSymmetricProfile::new(vec![(0.1, 1.0)]).is_err());
        assert!(CapSymmetricProfile::new(vec![(0.1, 1.0), (0.1, 2.0)]).is_err());
        assert!(CapSymmetricProfile::new(vec![(0.1, 4.0), (0.2, 2.0)]).is_err());
        let c = CapSymmetricProfile::new(vec![(0.1, 1.0), (0.3, 2.0)]).unwrap();
        assert!((c.alpha(0.2) - 1.5).abs() < 1e-15);
        assert_eq!(c.alpha(0.05), 0.0);
        assert!((c.section_length(0.2) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn uniqueness_thresholds_cases() {
        assert_eq!(
            flat().uniqueness_thresholds().unwrap(),
            (1.0, f64::INFINITY)
        );
        let (r, v0) = ramp().uniqueness_thresholds().unwrap();
        assert_eq!(r, 0.3);
        assert!((v0 - 1.2428278629585995).abs() < 1e-12);
        let p = Profile::new(DensitySpec::new(&[(0.0, 0.5)]).unwrap()).unwrap();
        assert_eq!(p.uniqueness_thresholds().unwrap(), (0.0, 0.0));
    }

    #[test]
    fn minimality_report() {
        let p = flat();
        let set = AnnulusUnion::new(vec![0.5, 0.3, 0.2, 0.0]).unwrap();
        let v = annuli_volume(&p, &set).unwrap();
        let ball = AnnulusUnion::ball(p.ball_radius_for_volume(v).unwrap()).unwrap();
        let report = verify_ball_minimality(
            &p,
            v,
            &[Competitor::Annuli(set), Competitor::Annuli(ball)],
            1e-8,
        )
        .unwrap();
        assert!(report.all_passed());
        assert!((report.checks[0].slack - 7.679269196483982).abs() < 1e-9);
        assert!(report.checks[1].slack.abs() < 1e-8);
        let wrong = AnnulusUnion::ball(0.2).unwrap();
        assert!(matches!(
            verify_ball_minimality(&p, v, &[Competitor::Annuli(wrong)], 1e-8),
            Err(Error::VolumeMismatch { index: 0, .. })
        ));
    }
}
