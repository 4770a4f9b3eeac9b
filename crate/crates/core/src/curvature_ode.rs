//! Closed-form solutions of the boundary curvature equation
//!
//! ```text
//! u' + (1/τ + ρ̃) u + λ ζ = 0   on (a, b),   u(a) = η₁, u(b) = η₂
//! ```
//!
//! and of its Riccati transform `w = 1/u`. Since `𝚐' = (1/τ + ρ̃) 𝚐`, the
//! equation integrates to `(u 𝚐)' = -λ 𝚏`, so every solution is
//! `u = (η₁ 𝚐(a) - λ ∫_a^τ 𝚏) / 𝚐` with the multiplier fixed by the right
//! boundary value. Nothing here time-steps an ODE.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use crate::density::{zeta_at, DensitySpec};
use crate::error::{ensure_interval, ensure_radius, Error, Result};
use crate::numerics::{integrate, integrate_with_breaks, SingularityHint};
use crate::profile::{
    integrate_little_f, little_f_at, little_g_at, log_g_increment, log_g_step, Primitive,
};

const UNIFORM_POINTS: usize = 512;
const PRIMITIVE_PIECES: usize = 32;
const OFFSET_TOL: f64 = 1e-15;
const CELL_TOL: f64 = 1e-13;

/// Boundary signature `η ∈ {±1}²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Eta {
    start: i8,
    end: i8,
}

impl Eta {
    pub const PLUS_PLUS: Eta = Eta { start: 1, end: 1 };
    pub const PLUS_MINUS: Eta = Eta { start: 1, end: -1 };
    pub const MINUS_PLUS: Eta = Eta { start: -1, end: 1 };
    pub const MINUS_MINUS: Eta = Eta { start: -1, end: -1 };

    pub fn new(start: i32, end: i32) -> Result<Self> {
        let ok = |s: i32| s == 1 || s == -1;
        if ok(start) && ok(end) {
            Ok(Eta {
                start: start as i8,
                end: end as i8,
            })
        } else {
            Err(Error::Domain {
                what: "eta",
                value: (if ok(start) { end } else { start }) as f64,
                expected: "+1 or -1",
            })
        }
    }

    pub fn start(self) -> f64 {
        self.start as f64
    }

    pub fn end(self) -> f64 {
        self.end as f64
    }
}

impl fmt::Display for Eta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.start, self.end)
    }
}

impl FromStr for Eta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let parse = |p: &str| -> Result<i32> {
            p.trim_start_matches('+')
                .parse::<i32>()
                .map_err(|_| Error::Domain {
                    what: "eta",
                    value: f64::NAN,
                    expected: "two entries of +1/-1 separated by a comma",
                })
        };
        match parts.as_slice() {
            [x, y] => Eta::new(parse(x)?, parse(y)?),
            _ => Err(Error::Domain {
                what: "eta",
                value: f64::NAN,
                expected: "two entries of +1/-1 separated by a comma",
            }),
        }
    }
}

/// Which boundary data a [`BvpSolution`] satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Signature(Eta),
    /// `u(0) = 0`, `u(b) = 1` on `[0, b]`.
    FromZero,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Signature(eta) => eta.fmt(f),
            Boundary::FromZero => f.write_str("(0,1)"),
        }
    }
}

fn integral_of_f(d: &DensitySpec, a: f64, b: f64) -> Result<f64> {
    integrate_little_f(d, a, b)
}

/// `m = (𝚐(b) - 𝚐(a)) / ∫_a^b 𝚏`.
pub fn m_functional(d: &DensitySpec, a: f64, b: f64) -> Result<f64> {
    ensure_interval(a, b)?;
    let rise = if a > 0.0 {
        little_g_at(d, a) * log_g_increment(d, a, b).exp_m1()
    } else {
        little_g_at(d, b)
    };
    Ok(rise / integral_of_f(d, a, b)?)
}

/// `m̂ = (𝚐(a) + 𝚐(b)) / ∫_a^b 𝚏`.
pub fn m_hat_functional(d: &DensitySpec, a: f64, b: f64) -> Result<f64> {
    ensure_interval(a, b)?;
    Ok((little_g_at(d, a) + little_g_at(d, b)) / integral_of_f(d, a, b)?)
}

/// Geodesic curvature `k = -ρ̃(τ) u - λ ζ(τ)` of a boundary curve with
/// `sin σ = u` and multiplier `λ`; the generalised curvature
/// `(k + ρ̃ u)/ζ` is then `-λ`.
pub fn generalized_curvature(d: &DensitySpec, tau: f64, u: f64, multiplier: f64) -> Result<f64> {
    ensure_radius("tau", tau)?;
    if tau == 0.0 {
        return Err(Error::Domain {
            what: "tau",
            value: tau,
            expected: "(0, 1)",
        });
    }
    if !(u.abs() <= 1.0) {
        return Err(Error::Domain {
            what: "u",
            value: u,
            expected: "[-1, 1]",
        });
    }
    Ok(-d.rho_tilde_at(tau) * u - multiplier * zeta_at(tau))
}

fn solution_grid(d: &DensitySpec, a: f64, b: f64) -> Vec<f64> {
    let len = b - a;
    let mut grid: Vec<f64> = (0..UNIFORM_POINTS)
        .map(|i| a + len * i as f64 / (UNIFORM_POINTS - 1) as f64)
        .collect();
    grid.extend(d.breakpoints().iter().copied().filter(|&t| t > a && t < b));
    for k in 2..=8 {
        let off = len * 10f64.powi(-k);
        grid.push(a + off);
        grid.push(b - off);
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    *grid.last_mut().expect("non-empty") = b;
    grid
}

/// Closed-form solution `(u, λ)` of the linear boundary problem.
#[derive(Debug, Clone)]
pub struct BvpSolution {
    density: DensitySpec,
    a: f64,
    b: f64,
    boundary: Boundary,
    multiplier: f64,
    u_a: f64,
    u_b: f64,
    g_a: f64,
    g_b: f64,
    primitive: Primitive,
    grid: Vec<f64>,
    values: Vec<f64>,
}

/// Solves `u' + (1/τ + ρ̃)u + λζ = 0`, `u(a) = η₁`, `u(b) = η₂` for `0 < a < b < 1`.
///
/// The multipliers are `λ = -m` for `(1,1)`, `m` for `(-1,-1)`, `m̂` for
/// `(1,-1)` and `-m̂` for `(-1,1)`.
pub fn solve_linear_bvp(d: &DensitySpec, a: f64, b: f64, eta: Eta) -> Result<BvpSolution> {
    ensure_interval(a, b)?;
    if a <= 0.0 {
        return Err(Error::Domain {
            what: "a",
            value: a,
            expected: "a > 0 (use solve_bvp_a_zero for a = 0)",
        });
    }
    let multiplier = match (eta.start, eta.end) {
        (1, 1) => -m_functional(d, a, b)?,
        (-1, -1) => m_functional(d, a, b)?,
        (1, -1) => m_hat_functional(d, a, b)?,
        _ => -m_hat_functional(d, a, b)?,
    };
    BvpSolution::build(
        d,
        a,
        b,
        Boundary::Signature(eta),
        multiplier,
        eta.start(),
        eta.end(),
    )
}

/// Solves the same equation on `[0, b]` with `u(0) = 0`, `u(b) = 1`, giving
/// `u = (𝚐(b)/F(b)) F/𝚐` and `λ = -𝚐(b)/F(b)`.
pub fn solve_bvp_a_zero(d: &DensitySpec, b: f64) -> Result<BvpSolution> {
    ensure_interval(0.0, b)?;
    let multiplier = -little_g_at(d, b) / integral_of_f(d, 0.0, b)?;
    BvpSolution::build(d, 0.0, b, Boundary::FromZero, multiplier, 0.0, 1.0)
}

impl BvpSolution {
    fn build(
        d: &DensitySpec,
        a: f64,
        b: f64,
        boundary: Boundary,
        multiplier: f64,
        u_a: f64,
        u_b: f64,
    ) -> Result<Self> {
        let primitive = Primitive::new(d, a, b, PRIMITIVE_PIECES)?;
        let mut sol = BvpSolution {
            density: d.clone(),
            a,
            b,
            boundary,
            multiplier,
            u_a,
            u_b,
            g_a: little_g_at(d, a),
            g_b: little_g_at(d, b),
            primitive,
            grid: solution_grid(d, a, b),
            values: Vec::new(),
        };
        sol.values = sol
            .grid
            .iter()
            .map(|&t| sol.u(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(sol)
    }

    pub fn density(&self) -> &DensitySpec {
        &self.density
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn multiplier(&self) -> f64 {
        self.multiplier
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `u(τ)`, evaluated from whichever endpoint is closer.
    pub fn u(&self, tau: f64) -> Result<f64> {
        let d = &self.density;
        if tau <= self.a {
            return Ok(self.u_a);
        }
        if tau >= self.b {
            return Ok(self.u_b);
        }
        let g = little_g_at(d, tau);
        if tau - self.a <= self.b - tau {
            Ok((self.u_a * self.g_a - self.multiplier * self.primitive.eval(d, tau)?) / g)
        } else {
            Ok((self.u_b * self.g_b + self.multiplier * self.primitive.tail(d, tau)?) / g)
        }
    }

    /// `u'(τ)` from the differential equation (valid away from density kinks).
    pub fn slope(&self, tau: f64) -> Result<f64> {
        let u = self.u(tau)?;
        Ok(-(1.0 / tau + self.density.rho_tilde_at(tau)) * u - self.multiplier * zeta_at(tau))
    }

    fn saturated(&self, from_left: bool) -> bool {
        let u = if from_left { self.u_a } else { self.u_b };
        u.abs() == 1.0
    }

    /// `∫_0^eps 𝚏(x ± s) ds`, integrated in the offset variable.
    fn f_mass_near(&self, x: f64, sign: f64, eps: f64) -> Result<f64> {
        if eps <= 0.0 {
            return Ok(0.0);
        }
        let d = &self.density;
        let breaks: Vec<f64> = d.breakpoints().iter().map(|&n| sign * (n - x)).collect();
        Ok(integrate_with_breaks(
            |s| little_f_at(d, x + sign * s),
            0.0,
            eps,
            &breaks,
            SingularityHint::NONE,
            OFFSET_TOL,
        )?
        .value)
    }

    /// `1 - u_x u` at offset `eps` from the endpoint `x ∈ {a, b}`, from
    /// `𝚐(τ)(1 - u_x u) = 𝚐(τ) - 𝚐(x) ± u_x λ ∫ 𝚏`.
    fn gap_at_offset(&self, from_left: bool, eps: f64) -> Result<f64> {
        let d = &self.density;
        let (x, sign, g_x, u_x) = if from_left {
            (self.a, 1.0, self.g_a, self.u_a)
        } else {
            (self.b, -1.0, self.g_b, self.u_b)
        };
        if eps <= 0.0 {
            return Ok(1.0 - u_x * u_x);
        }
        let mass = self.f_mass_near(x, sign, eps)?;
        let num = g_x * log_g_step(d, x, sign * eps).exp_m1() + sign * u_x * self.multiplier * mass;
        Ok(num / little_g_at(d, x + sign * eps))
    }

    /// `1 - |u(τ)|`, computed without cancellation near endpoints where
    /// `|u| = 1`.
    pub fn one_minus_abs_u(&self, tau: f64) -> Result<f64> {
        let near_a = tau - self.a <= self.b - tau;
        let offset = if near_a { tau - self.a } else { self.b - tau };
        if self.saturated(near_a) {
            let gap = self.gap_at_offset(near_a, offset.max(0.0))?;
            return Ok(gap.min(2.0 - gap));
        }
        Ok(1.0 - self.u(tau)?.abs())
    }

    /// `kernel(u, 1 - |u|) / τ` at offset `eps` from a saturated endpoint.
    fn kernel_at_offset<K: Fn(f64, f64) -> f64>(
        &self,
        kernel: &K,
        from_left: bool,
        eps: f64,
    ) -> Result<f64> {
        let (tau, u_x) = if from_left {
            (self.a + eps, self.u_a)
        } else {
            (self.b - eps, self.u_b)
        };
        let gap = self.gap_at_offset(from_left, eps)?;
        Ok(kernel(u_x * (1.0 - gap), gap.min(2.0 - gap)) / tau)
    }

    fn kernel_at<K: Fn(f64, f64) -> f64>(&self, kernel: &K, tau: f64) -> Result<f64> {
        Ok(kernel(self.u(tau)?, self.one_minus_abs_u(tau)?) / tau)
    }

    /// Integrals of `kernel(u, 1 - |u|) / τ` over consecutive grid cells.
    ///
    /// On the half of `[a, b]` next to an endpoint with `|u| = 1`, cells are
    /// integrated in `s = sqrt(offset)`, with the offset from that endpoint
    /// passed exactly. This absorbs inverse-square-root singularities such as
    /// `u / sqrt(1 - u²)` and avoids the rounding of `a + offset`.
    pub(crate) fn integrate_cells<K: Fn(f64, f64) -> f64>(&self, kernel: K) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.grid.len() - 1);
        for w in self.grid.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let from_left = 0.5 * (lo + hi) - self.a <= self.b - 0.5 * (lo + hi);
            let r = if self.saturated(from_left) {
                let (o1, o2) = if from_left {
                    (lo - self.a, hi - self.a)
                } else {
                    (self.b - hi, self.b - lo)
                };
                integrate(
                    |s| {
                        2.0 * s
                            * self
                                .kernel_at_offset(&kernel, from_left, s * s)
                                .unwrap_or(f64::NAN)
                    },
                    o1.sqrt(),
                    o2.sqrt(),
                    SingularityHint::NONE,
                    CELL_TOL,
                )?
            } else {
                integrate(
                    |t| self.kernel_at(&kernel, t).unwrap_or(f64::NAN),
                    lo,
                    hi,
                    SingularityHint::NONE,
                    CELL_TOL,
                )?
            };
            out.push(r.value);
        }
        Ok(out)
    }

    /// Central-difference residual of the differential equation at `τ`.
    pub fn ode_residual(&self, tau: f64, step: f64) -> Result<f64> {
        let du = (self.u(tau + step)? - self.u(tau - step)?) / (2.0 * step);
        Ok(du
            + (1.0 / tau + self.density.rho_tilde_at(tau)) * self.u(tau)?
            + self.multiplier * zeta_at(tau))
    }

    pub fn max_abs_u(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Interior grid points where `|u| >= 1`.
    pub(crate) fn first_interior_saturation(&self) -> Result<Option<f64>> {
        for &t in &self.grid[1..self.grid.len() - 1] {
            if self.one_minus_abs_u(t)? <= 0.0 {
                return Ok(Some(t));
            }
        }
        Ok(None)
    }

    /// Number of strict sign changes of `u` along the grid.
    pub fn sign_changes(&self) -> usize {
        let signs: Vec<f64> = self
            .values
            .iter()
            .filter(|v| **v != 0.0)
            .map(|v| v.signum())
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

/// Closed-form solution `(w, m)` of `w' + m ζ w² = (1/τ + ρ̃) w`,
/// `w(a) = w(b) = 1`, obtained as `w = 1/u` for the `(1,1)` linear problem.
#[derive(Debug, Clone)]
pub struct RiccatiSolution {
    linear: BvpSolution,
    values: Vec<f64>,
}

pub fn solve_riccati(d: &DensitySpec, a: f64, b: f64) -> Result<RiccatiSolution> {
    let linear = solve_linear_bvp(d, a, b, Eta::PLUS_PLUS)?;
    let values: Vec<f64> = linear.values.iter().map(|u| 1.0 / u).collect();
    if let Some(i) = values.iter().position(|w| !(*w > 0.0)) {
        return Err(Error::HypothesisViolated(format!(
            "w = 1/u is not positive at tau = {}",
            linear.grid[i]
        )));
    }
    Ok(RiccatiSolution { linear, values })
}

impl RiccatiSolution {
    pub fn linear(&self) -> &BvpSolution {
        &self.linear
    }

    pub fn interval(&self) -> (f64, f64) {
        self.linear.interval()
    }

    /// The Riccati multiplier, equal to `m`.
    pub fn multiplier(&self) -> f64 {
        -self.linear.multiplier
    }

    pub fn grid(&self) -> &[f64] {
        &self.linear.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn w(&self, tau: f64) -> Result<f64> {
        Ok(1.0 / self.linear.u(tau)?)
    }

    /// `w'` from `u'`.
    pub fn slope(&self, tau: f64) -> Result<f64> {
        let u = self.linear.u(tau)?;
        Ok(-self.linear.slope(tau)? / (u * u))
    }

    /// Central-difference residual of the Riccati equation at `τ`.
    pub fn riccati_residual(&self, tau: f64, step: f64) -> Result<f64> {
        let dw = (self.w(tau + step)? - self.w(tau - step)?) / (2.0 * step);
        let w = self.w(tau)?;
        let d = self.linear.density();
        Ok(dw + self.multiplier() * zeta_at(tau) * w * w - (1.0 / tau + d.rho_tilde_at(tau)) * w)
    }

    pub fn max_w(&self) -> f64 {
        self.values.iter().fold(f64::MIN, |m, &w| m.max(w))
    }
}

/// The angle `θ₂` along the reconstructed boundary curve.
#[derive(Debug, Clone)]
pub struct CurveReconstruction {
    pub grid: Vec<f64>,
    pub theta: Vec<f64>,
    pub winding: f64,
}

impl CurveReconstruction {
    /// Points `(τ cos θ₂, τ sin θ₂)`.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.grid
            .iter()
            .zip(&self.theta)
            .map(|(&t, &th)| (t * th.cos(), t * th.sin()))
            .collect()
    }
}

/// `u / sqrt(1 - u²)` given `u` and `1 - |u|`.
pub(crate) fn tangent_kernel(u: f64, gap: f64) -> f64 {
    u / (gap * (2.0 - gap)).sqrt()
}

/// Integrates `θ₂' = -(1/τ) u / sqrt(1 - u²)` from `θ_start` at `τ = a`.
pub fn reconstruct_curve(sol: &BvpSolution, theta_start: f64) -> Result<CurveReconstruction> {
    if let Some(tau) = sol.first_interior_saturation()? {
        return Err(Error::SingularInterior { tau });
    }
    let cells = sol.integrate_cells(tangent_kernel)?;
    let mut theta = Vec::with_capacity(cells.len() + 1);
    let mut acc = theta_start;
    theta.push(acc);
    for c in cells {
        acc -= c;
        theta.push(acc);
    }
    Ok(CurveReconstruction {
        winding: acc - theta_start,
        grid: sol.grid.clone(),
        theta,
    })
}

/// Default starting angle for [`reconstruct_curve`].
pub const DEFAULT_THETA_START: f64 = FRAC_PI_2;
