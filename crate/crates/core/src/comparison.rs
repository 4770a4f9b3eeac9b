//! Distribution functions `μ_u(t) = μ({u > t})` for `μ(dx) = dx/x`, the
//! unweighted closed forms, integral functionals of boundary solutions and
//! the inequality checks built on them.
//!
//! Level sets are located on monotone pieces: turning points come from sign
//! changes of the analytic derivative, refined by bracketed root-finding, and
//! each crossing `u(x) = t` is then a bracketed root on one piece.

use crate::curvature_ode::{
    m_functional, m_hat_functional, tangent_kernel, Boundary, BvpSolution, Eta, RiccatiSolution,
};
use crate::density::{rho_hat_at, DensitySpec, Side};
use crate::error::{ensure_interval, Error, Result};
use crate::numerics::solve_monotone;
use crate::report::{Check, VerificationReport};

/// Central-difference step in `t` for `μ'`.
pub const MU_DERIVATIVE_STEP: f64 = 1e-4;
/// Tolerance of the coth differential inequality (relative to its right side).
pub const MU_DERIVATIVE_TOL: f64 = 1e-4;
/// Tolerance of `‖w‖ ≤ A/G`.
pub const NORM_TOL: f64 = 1e-8;
/// Smallest `max(w - 1)` for which `w > 1` is treated as decidable.
pub const MIN_RESOLVABLE_GAP: f64 = 1e-9;
/// `|slack| <= EQUALITY_FACTOR * tol` classifies as equality.
pub const EQUALITY_FACTOR: f64 = 10.0;

/// A real function on `[a, b]` with an analytic derivative.
pub trait LevelFunction {
    fn domain(&self) -> (f64, f64);
    fn value(&self, x: f64) -> f64;
    fn slope(&self, x: f64) -> f64;
    /// Points fine enough that every turning point is isolated between two
    /// consecutive samples.
    fn samples(&self) -> Vec<f64>;
}

impl LevelFunction for BvpSolution {
    fn domain(&self) -> (f64, f64) {
        self.interval()
    }
    fn value(&self, x: f64) -> f64 {
        self.u(x).unwrap_or(f64::NAN)
    }
    fn slope(&self, x: f64) -> f64 {
        BvpSolution::slope(self, x).unwrap_or(f64::NAN)
    }
    fn samples(&self) -> Vec<f64> {
        self.grid().to_vec()
    }
}

impl LevelFunction for RiccatiSolution {
    fn domain(&self) -> (f64, f64) {
        self.interval()
    }
    fn value(&self, x: f64) -> f64 {
        self.w(x).unwrap_or(f64::NAN)
    }
    fn slope(&self, x: f64) -> f64 {
        RiccatiSolution::slope(self, x).unwrap_or(f64::NAN)
    }
    fn samples(&self) -> Vec<f64> {
        self.grid().to_vec()
    }
}

/// `x ↦ -f(x)`.
pub struct Negated<'a, F: ?Sized>(pub &'a F);

impl<F: LevelFunction + ?Sized> LevelFunction for Negated<'_, F> {
    fn domain(&self) -> (f64, f64) {
        self.0.domain()
    }
    fn value(&self, x: f64) -> f64 {
        -self.0.value(x)
    }
    fn slope(&self, x: f64) -> f64 {
        -self.0.slope(x)
    }
    fn samples(&self) -> Vec<f64> {
        self.0.samples()
    }
}

/// A level function given by closures, sampled uniformly.
pub struct SmoothFunction<V, D> {
    pub a: f64,
    pub b: f64,
    pub value: V,
    pub slope: D,
    pub samples: usize,
}

impl<V: Fn(f64) -> f64, D: Fn(f64) -> f64> LevelFunction for SmoothFunction<V, D> {
    fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }
    fn value(&self, x: f64) -> f64 {
        (self.value)(x)
    }
    fn slope(&self, x: f64) -> f64 {
        (self.slope)(x)
    }
    fn samples(&self) -> Vec<f64> {
        let n = self.samples.max(2);
        (0..n)
            .map(|i| self.a + (self.b - self.a) * i as f64 / (n - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    lo: f64,
    hi: f64,
    v_lo: f64,
    v_hi: f64,
}

/// Monotone decomposition of a [`LevelFunction`].
pub struct LevelSets<'a, F: ?Sized> {
    f: &'a F,
    pieces: Vec<Piece>,
}

impl<'a, F: LevelFunction + ?Sized> LevelSets<'a, F> {
    pub fn new(f: &'a F) -> Result<Self> {
        let (a, b) = f.domain();
        ensure_interval(a, b)?;
        let samples: Vec<f64> = f
            .samples()
            .into_iter()
            .filter(|&x| x > a && x < b)
            .collect();
        let mut cuts = vec![a];
        let mut prev: Option<(f64, f64)> = None;
        for &x in &samples {
            let s = f.slope(x);
            if !s.is_finite() {
                return Err(Error::Domain {
                    what: "slope",
                    value: s,
                    expected: "finite derivative inside (a, b)",
                });
            }
            if s == 0.0 {
                cuts.push(x);
                prev = None;
                continue;
            }
            if let Some((xp, sp)) = prev {
                if sp.signum() != s.signum() {
                    cuts.push(solve_monotone(|y| f.slope(y), 0.0, (xp, x), 0.0)?);
                }
            }
            prev = Some((x, s));
        }
        cuts.push(b);
        cuts.dedup();
        let pieces = cuts
            .windows(2)
            .map(|w| Piece {
                lo: w[0],
                hi: w[1],
                v_lo: f.value(w[0]),
                v_hi: f.value(w[1]),
            })
            .collect();
        Ok(LevelSets { f, pieces })
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    /// Values at the endpoints and turning points.
    pub fn critical_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.pieces.iter().map(|p| p.v_lo).collect();
        v.push(self.pieces.last().expect("at least one piece").v_hi);
        v
    }

    /// Maximum of the function, attained at a piece boundary.
    pub fn max_value(&self) -> f64 {
        self.critical_values().into_iter().fold(f64::MIN, f64::max)
    }

    /// `μ({f > t})`.
    pub fn mu(&self, t: f64) -> Result<f64> {
        let mut total = 0.0;
        for p in &self.pieces {
            let (above_lo, above_hi) = (p.v_lo > t, p.v_hi > t);
            total += match (above_lo, above_hi) {
                (false, false) => 0.0,
                (true, true) => (p.hi / p.lo).ln(),
                (false, true) => {
                    let x = solve_monotone(|x| self.f.value(x), t, (p.lo, p.hi), 0.0)?;
                    (p.hi / x).ln()
                }
                (true, false) => {
                    let x = solve_monotone(|x| self.f.value(x), t, (p.lo, p.hi), 0.0)?;
                    (x / p.lo).ln()
                }
            };
        }
        Ok(total)
    }

    /// `-Σ 1/(x |f'(x)|)` over the crossings `f(x) = t`.
    pub fn level_sum(&self, t: f64) -> Result<f64> {
        let mut total = 0.0;
        for p in &self.pieces {
            if (p.v_lo - t) * (p.v_hi - t) < 0.0 {
                let x = solve_monotone(|x| self.f.value(x), t, (p.lo, p.hi), 0.0)?;
                total -= 1.0 / (x * self.f.slope(x).abs());
            }
        }
        Ok(total)
    }

    pub fn tabulate(&self, levels: &[f64]) -> Result<DistributionFunction> {
        DistributionFunction::new(
            levels.to_vec(),
            levels
                .iter()
                .map(|&t| self.mu(t))
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

/// `t ↦ μ({u > t})` sampled at strictly increasing levels.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionFunction {
    levels: Vec<f64>,
    values: Vec<f64>,
}

impl DistributionFunction {
    pub fn new(levels: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if levels.len() != values.len() {
            return Err(Error::InvalidShape(format!(
                "{} levels but {} values",
                levels.len(),
                values.len()
            )));
        }
        if let Some(i) = levels.windows(2).position(|w| !(w[0] < w[1])) {
            return Err(Error::Monotonicity {
                index: i + 1,
                prev: levels[i],
                next: levels[i + 1],
            });
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0)) {
            return Err(Error::Domain {
                what: "distribution value",
                value: *v,
                expected: ">= 0",
            });
        }
        Ok(DistributionFunction { levels, values })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest increase between consecutive values (zero for a
    /// non-increasing table).
    pub fn max_increase(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }
}

/// `μ({f > t})` for a single level.
pub fn distribution_mu<F: LevelFunction + ?Sized>(f: &F, t: f64) -> Result<f64> {
    LevelSets::new(f)?.mu(t)
}

fn ensure_positive_interval(a: f64, b: f64) -> Result<()> {
    ensure_interval(a, b)?;
    if a <= 0.0 {
        return Err(Error::Domain {
            what: "a",
            value: a,
            expected: "0 < a < b",
        });
    }
    Ok(())
}

/// `m₀ = (1 + ab)/(a + b)`, the value of `m` for `λ ≡ 0`.
pub fn m0(a: f64, b: f64) -> Result<f64> {
    ensure_interval(a, b)?;
    Ok((1.0 + a * b) / (a + b))
}

/// `m̂₀ = (1 - ab)/(b - a)`, the value of `m̂` for `λ ≡ 0`.
pub fn m_hat0(a: f64, b: f64) -> Result<f64> {
    ensure_interval(a, b)?;
    Ok((1.0 - a * b) / (b - a))
}

/// `u₀(τ) = (ab/τ - τ)/(b - a)`, the `(1,-1)` solution for `λ ≡ 0`.
pub fn closed_form_u0(a: f64, b: f64, tau: f64) -> Result<f64> {
    ensure_positive_interval(a, b)?;
    Ok((a * b / tau - tau) / (b - a))
}

/// `μ_{u₀}(t) = ln((-(b-a)t + sqrt((b-a)²t² + 4ab)) / (2a))`.
pub fn closed_form_mu_u0(a: f64, b: f64, t: f64) -> Result<f64> {
    ensure_positive_interval(a, b)?;
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::Domain {
            what: "t",
            value: t,
            expected: "[-1, 1]",
        });
    }
    let l = b - a;
    Ok(
        ((-l * t + (l * l * t * t + 4.0 * a * b).sqrt()) / (2.0 * a))
            .ln()
            .max(0.0),
    )
}

/// `w₀(τ) = 2Aτ/(G² + τ²)` with `A = (a+b)/2`, `G = sqrt(ab)`.
pub fn closed_form_w0(a: f64, b: f64, tau: f64) -> Result<f64> {
    ensure_positive_interval(a, b)?;
    Ok((a + b) * tau / (a * b + tau * tau))
}

/// `A/G`, the maximum of `w₀`.
pub fn w0_max(a: f64, b: f64) -> Result<f64> {
    ensure_positive_interval(a, b)?;
    Ok(0.5 * (a + b) / (a * b).sqrt())
}

/// `μ_{w₀}(t) = 2 ln((λ + sqrt(λ² - t²))/t)` with `λ = A/G`, for `t ∈ [1, A/G]`.
pub fn closed_form_mu_w0(a: f64, b: f64, t: f64) -> Result<f64> {
    let lam = w0_max(a, b)?;
    if !(t >= 1.0 && t <= lam) {
        return Err(Error::Domain {
            what: "t",
            value: t,
            expected: "[1, A/G]",
        });
    }
    Ok(2.0 * ((lam + ((lam - t) * (lam + t)).sqrt()) / t).ln())
}

/// Odd, strictly increasing weight `φ` in `∫ φ(u) dμ`.
#[derive(Clone, Copy)]
pub enum OddWeight {
    Identity,
    /// `t / sqrt(1 - t²)`
    Tangent,
    Custom(fn(f64) -> f64),
}

impl OddWeight {
    fn eval(self, u: f64, gap: f64) -> f64 {
        match self {
            OddWeight::Identity => u,
            OddWeight::Tangent => tangent_kernel(u, gap),
            OddWeight::Custom(phi) => phi(u),
        }
    }
}

fn require_plus_minus(sol: &BvpSolution) -> Result<()> {
    if sol.boundary() != Boundary::Signature(Eta::PLUS_MINUS) {
        return Err(Error::Domain {
            what: "boundary signature",
            value: f64::NAN,
            expected: "eta = (1,-1)",
        });
    }
    Ok(())
}

/// Asserts `u > -1` on `[a, b)` (and `u < 1` inside when `strict_upper`).
fn require_u_above_minus_one(sol: &BvpSolution, strict_upper: bool) -> Result<()> {
    let g = sol.grid();
    for (&t, &u) in g[1..g.len() - 1].iter().zip(&sol.values()[1..]) {
        let inside = sol.one_minus_abs_u(t)? > 0.0;
        if !inside && (u < 0.0 || strict_upper) {
            return Err(Error::HypothesisViolated(format!(
                "|u| >= 1 at interior point tau = {t} (u = {u})"
            )));
        }
    }
    Ok(())
}

/// Asserts `w > 1` on `(a, b)`, with `w - 1` resolvable somewhere.
fn require_w_above_one(sol: &RiccatiSolution) -> Result<()> {
    let lin = sol.linear();
    let g = lin.grid();
    let mut widest = 0.0f64;
    for &t in &g[1..g.len() - 1] {
        let u = lin.u(t)?;
        let gap = lin.one_minus_abs_u(t)?;
        if !(u > 0.0) || gap <= 0.0 {
            return Err(Error::HypothesisViolated(format!(
                "w = {} is not > 1 at tau = {t}",
                1.0 / u
            )));
        }
        widest = widest.max(gap);
    }
    if widest < MIN_RESOLVABLE_GAP {
        return Err(Error::HypothesisViolated(format!(
            "max(1 - 1/w) = {widest:e} is below {MIN_RESOLVABLE_GAP:e}; w > 1 is not resolvable"
        )));
    }
    Ok(())
}

/// `∫_a^b φ(u) dx/x` for the `(1,-1)` solution.
pub fn integral_phi_of_u(sol: &BvpSolution, weight: OddWeight) -> Result<f64> {
    require_plus_minus(sol)?;
    require_u_above_minus_one(sol, matches!(weight, OddWeight::Tangent))?;
    Ok(sol
        .integrate_cells(|u, gap| weight.eval(u, gap))?
        .iter()
        .sum())
}

/// `∫_a^b dμ / sqrt(w² - 1)`.
pub fn winding_integral_w(sol: &RiccatiSolution) -> Result<f64> {
    require_w_above_one(sol)?;
    // 1/sqrt(w² - 1) = u/sqrt(1 - u²) with u = 1/w
    Ok(sol.linear().integrate_cells(tangent_kernel)?.iter().sum())
}

/// Result of an inequality that is an equality exactly when `ϱ ≡ 0` on `[a, b)`.
#[derive(Debug, Clone)]
pub struct InequalityOutcome {
    pub check: Check,
    pub equality_observed: bool,
    pub equality_expected: bool,
}

impl InequalityOutcome {
    fn new(check: Check, tol: f64, equality_expected: bool) -> Self {
        let equality_observed = check.slack.abs() <= EQUALITY_FACTOR * tol;
        InequalityOutcome {
            check,
            equality_observed,
            equality_expected,
        }
    }

    pub fn consistent(&self) -> bool {
        self.equality_observed == self.equality_expected
    }

    /// The inequality itself plus a check that equality occurs exactly when
    /// the density vanishes on the interval.
    pub fn into_report(self) -> VerificationReport {
        let mut r = VerificationReport::new();
        let name = format!("{}:equality-iff-flat", self.check.name);
        let tol = self.check.tolerance;
        r.push(equality_classification(
            name,
            self.check.slack.abs(),
            tol,
            self.equality_expected,
        ));
        r.checks.insert(0, self.check);
        r
    }
}

/// `gap` within `10·tol` of zero when `expected`, clearly positive otherwise.
///
/// A strict gap shrinks continuously to zero with the weight, so when it
/// is not expected to vanish but lies within `10·tol` of zero the entry is
/// report-only: strictness is not resolvable at that tolerance.
pub fn equality_classification(name: String, gap: f64, tol: f64, expected: bool) -> Check {
    let margin = EQUALITY_FACTOR * tol;
    if expected {
        Check::at_most(name, gap, 0.0, margin)
    } else if gap.abs() <= margin {
        Check::report_only(name, gap, 0.0)
            .with_note(format!("strict gap below resolution {margin:e}"))
    } else {
        Check::exceeds(name, gap, 0.0, margin)
    }
}

/// `(ρ̂(b) - ρ̂(a)) m̂ <= 2 + a ρ̃₊(a) + b ρ̃₋(b)`.
pub fn check_reverse_hh(d: &DensitySpec, a: f64, b: f64, tol: f64) -> Result<InequalityOutcome> {
    ensure_interval(a, b)?;
    let lhs = (rho_hat_at(b) - rho_hat_at(a)) * m_hat_functional(d, a, b)?;
    let rhs = 2.0 + a * d.rho_tilde(a, Side::Plus)? + b * d.rho_tilde(b, Side::Minus)?;
    let check = Check::at_most(format!("reverse-hh[{a},{b}]"), lhs, rhs, tol);
    Ok(InequalityOutcome::new(check, tol, d.vanishes_on(a, b)))
}

/// `m <= λ(b-) + m₀`.
pub fn check_m_upper_bound(d: &DensitySpec, a: f64, b: f64, tol: f64) -> Result<InequalityOutcome> {
    ensure_interval(a, b)?;
    let lhs = m_functional(d, a, b)?;
    let rhs = d.ratio_one_sided(b, Side::Minus)? + m0(a, b)?;
    let check = Check::at_most(format!("m-bound[{a},{b}]"), lhs, rhs, tol);
    Ok(InequalityOutcome::new(check, tol, d.vanishes_on(a, b)))
}

/// `m >= m₀` and `m̂ >= m̂₀`, reported without a verdict.
pub fn report_multiplier_comparisons(
    d: &DensitySpec,
    a: f64,
    b: f64,
) -> Result<VerificationReport> {
    let mut r = VerificationReport::new();
    r.push(Check::report_only(
        format!("m-vs-m0[{a},{b}]"),
        m_functional(d, a, b)?,
        m0(a, b)?,
    ));
    r.push(Check::report_only(
        format!("m-hat-vs-m-hat0[{a},{b}]"),
        m_hat_functional(d, a, b)?,
        m_hat0(a, b)?,
    ));
    Ok(r)
}

/// `μ_u(t) <= μ_{-u}(t)` at each level in `(0, 1)` for the `(1,-1)`
/// solution, plus strictness when `ϱ ≢ 0` and equality otherwise.
pub fn check_mu_comparison_linear(
    sol: &BvpSolution,
    levels: &[f64],
    tol: f64,
) -> Result<VerificationReport> {
    require_plus_minus(sol)?;
    require_u_above_minus_one(sol, false)?;
    let (a, b) = sol.interval();
    let up = LevelSets::new(sol)?;
    let neg = Negated(sol);
    let down = LevelSets::new(&neg)?;
    let mut r = VerificationReport::new();
    let mut widest = 0.0f64;
    for &t in levels.iter().filter(|&&t| t > 0.0 && t < 1.0) {
        let (mu_u, mu_v) = (up.mu(t)?, down.mu(t)?);
        widest = widest.max((mu_v - mu_u).abs());
        r.push(Check::at_most(
            format!("mu-linear[{a},{b}]@{t}"),
            mu_u,
            mu_v,
            tol,
        ));
    }
    let flat = sol.density().vanishes_on(a, b);
    r.push(equality_classification(
        format!("mu-linear[{a},{b}]:equality-iff-flat"),
        widest,
        tol,
        flat,
    ));
    Ok(r)
}

/// `μ_w <= μ_{w₀}` on `[1, T)`, `‖w‖ <= A/G`, and the differential
/// inequality `-μ_w' >= (2/t) coth(μ_w/2)` at interior levels.
pub fn check_riccati_comparison(
    sol: &RiccatiSolution,
    levels: &[f64],
    tol: f64,
) -> Result<VerificationReport> {
    require_w_above_one(sol)?;
    let (a, b) = sol.interval();
    let sets = LevelSets::new(sol)?;
    let norm = sets.max_value();
    let bound = w0_max(a, b)?;
    let top = norm.min(bound);
    let mut r = VerificationReport::new();
    r.push(Check::at_most(
        format!("riccati-norm[{a},{b}]"),
        norm,
        bound,
        NORM_TOL,
    ));
    let mut widest = 0.0f64;
    for &t in levels.iter().filter(|&&t| t >= 1.0 && t < top) {
        let (mu_w, mu_w0) = (sets.mu(t)?, closed_form_mu_w0(a, b, t)?);
        widest = widest.max((mu_w0 - mu_w).abs());
        r.push(Check::at_most(
            format!("mu-riccati[{a},{b}]@{t}"),
            mu_w,
            mu_w0,
            tol,
        ));
    }
    let flat = sol.linear().density().vanishes_on(a, b);
    r.push(equality_classification(
        format!("mu-riccati[{a},{b}]:equality-iff-flat"),
        widest,
        tol,
        flat,
    ));

    let span = top - 1.0;
    let h = MU_DERIVATIVE_STEP.min(0.01 * span);
    let (lo, hi) = (1.0 + 0.05 * span, 1.0 + 0.8 * span);
    for &t in levels.iter().filter(|&&t| t >= lo && t <= hi) {
        let derivative = (sets.mu(t + h)? - sets.mu(t - h)?) / (2.0 * h);
        let mu = sets.mu(t)?;
        let rhs = 2.0 / (t * (0.5 * mu).tanh());
        r.push(Check::at_least(
            format!("mu-riccati-derivative[{a},{b}]@{t}"),
            -derivative,
            rhs,
            MU_DERIVATIVE_TOL * rhs.abs().max(1.0),
        ));
    }
    Ok(r)
}

/// `n` uniform levels strictly inside `(lo, hi)`.
pub fn interior_levels(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (1..=n)
        .map(|j| lo + (hi - lo) * j as f64 / (n + 1) as f64)
        .collect()
}
