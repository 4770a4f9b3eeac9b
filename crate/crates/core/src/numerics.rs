//! Adaptive Gauss–Kronrod quadrature with endpoint substitutions, and a
//! bracketing root finder for monotone functions.
//!
//! The quadrature is globally adaptive: the interval with the largest error
//! estimate is bisected until the summed estimate meets the tolerance or the
//! subdivision budget is exhausted. Running out of budget is an error.
//!
//! Inverse-square-root endpoint singularities `c / sqrt(x - x0)` are removed by
//! the substitution `x = x0 + s^2` (or `x = x0 - s^2` at a right endpoint)
//! before any refinement happens.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Default absolute tolerance for quadrature.
pub const QUAD_TOL: f64 = 1e-10;
/// Default function-value tolerance for root finding.
pub const ROOT_TOL: f64 = 1e-12;
/// Maximum number of live subintervals in one adaptive integration.
pub const MAX_INTERVALS: usize = 1 << 16;

const MAX_ROOT_ITERATIONS: usize = 500;

// 15-point Kronrod abscissae on [-1, 1] (non-negative half) with the embedded
// 7-point Gauss rule at odd indices.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_553,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Endpoint {
    Left,
    Right,
    /// Both ends; the interval is split at its midpoint.
    Both,
    #[default]
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SingularityKind {
    /// `c / sqrt(|x - x0|)` behaviour at the endpoint.
    InverseSquareRoot,
    /// Rapid growth towards the endpoint, such as `(1 - t)^-2` near the
    /// boundary of the disc. Handled by geometric pre-subdivision.
    DensityBlowup,
    #[default]
    None,
}

/// Where the integrand misbehaves and how.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SingularityHint {
    pub location: Endpoint,
    pub kind: SingularityKind,
}

impl SingularityHint {
    pub const NONE: SingularityHint = SingularityHint {
        location: Endpoint::None,
        kind: SingularityKind::None,
    };

    pub fn inverse_sqrt(location: Endpoint) -> Self {
        Self {
            location,
            kind: SingularityKind::InverseSquareRoot,
        }
    }

    pub fn blowup(location: Endpoint) -> Self {
        Self {
            location,
            kind: SingularityKind::DensityBlowup,
        }
    }

    fn is_consistent(&self) -> bool {
        matches!(
            (self.location, self.kind),
            (Endpoint::None, SingularityKind::None)
                | (
                    Endpoint::Left | Endpoint::Right | Endpoint::Both,
                    SingularityKind::InverseSquareRoot
                )
                | (
                    Endpoint::Left | Endpoint::Right | Endpoint::Both,
                    SingularityKind::DensityBlowup
                )
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
enum Map {
    Plain,
    /// x = origin + s^2
    SqrtLeft(f64),
    /// x = origin - s^2
    SqrtRight(f64),
}

impl Map {
    #[inline]
    fn apply<F: Fn(f64) -> f64>(self, f: &F, s: f64) -> f64 {
        match self {
            Map::Plain => f(s),
            Map::SqrtLeft(x0) => 2.0 * s * f(x0 + s * s),
            Map::SqrtRight(x0) => 2.0 * s * f(x0 - s * s),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    map: Map,
    value: f64,
    error: f64,
    abs: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, map: Map, lo: f64, hi: f64) -> Segment {
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = map.apply(f, centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs = fc.abs() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = map.apply(f, centre - dx);
        let f2 = map.apply(f, centre + dx);
        kronrod += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Segment {
        lo,
        hi,
        map,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
        abs: abs * half.abs(),
    }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// The returned error estimate never exceeds `max(tol, 64 eps ∫|f|)` on
/// success; when the budget of [`MAX_INTERVALS`] subintervals is exhausted
/// first, [`Error::NonConvergence`] is returned.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    hint: SingularityHint,
    tol: f64,
) -> Result<QuadratureResult> {
    integrate_with_breaks(f, a, b, &[], hint, tol)
}

/// Same as [`integrate`], with known kinks of the integrand supplied as
/// initial breakpoints. Breakpoints outside `(a, b)` are ignored.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    hint: SingularityHint,
    tol: f64,
) -> Result<QuadratureResult> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Domain {
            what: "integration interval",
            value: b - a,
            expected: "finite a < b",
        });
    }
    if !(tol > 0.0) {
        return Err(Error::Domain {
            what: "tol",
            value: tol,
            expected: "> 0",
        });
    }
    if !hint.is_consistent() {
        return Err(Error::Domain {
            what: "singularity hint",
            value: f64::NAN,
            expected: "consistent location/kind pair",
        });
    }

    let mut points: Vec<f64> = Vec::with_capacity(breaks.len() + 24);
    points.push(a);
    points.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    let left = matches!(hint.location, Endpoint::Left | Endpoint::Both);
    let right = matches!(hint.location, Endpoint::Right | Endpoint::Both);
    match hint.kind {
        SingularityKind::InverseSquareRoot if left && right => points.push(0.5 * (a + b)),
        SingularityKind::DensityBlowup => {
            for k in 1..=20 {
                let d = (b - a) * 0.5f64.powi(k);
                if left {
                    points.push(a + d);
                }
                if right {
                    points.push(b - d);
                }
            }
        }
        _ => {}
    }
    points.push(b);
    points.sort_by(f64::total_cmp);
    points.dedup();

    let n = points.len() - 1;
    let mut heap = BinaryHeap::with_capacity(n + 64);
    let mut evaluations = 0;
    for (i, w) in points.windows(2).enumerate() {
        let (lo, hi) = (w[0], w[1]);
        let sqrt_kind = hint.kind == SingularityKind::InverseSquareRoot;
        let seg = if sqrt_kind && left && i == 0 {
            gauss_kronrod(&f, Map::SqrtLeft(lo), 0.0, (hi - lo).sqrt())
        } else if sqrt_kind && right && i == n - 1 {
            gauss_kronrod(&f, Map::SqrtRight(hi), 0.0, (hi - lo).sqrt())
        } else {
            gauss_kronrod(&f, Map::Plain, lo, hi)
        };
        evaluations += 15;
        heap.push(seg);
    }

    loop {
        let (value, error, abs) = heap.iter().fold((0.0, 0.0, 0.0), |acc, s| {
            (acc.0 + s.value, acc.1 + s.error, acc.2 + s.abs)
        });
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::Domain {
                what: "integrand",
                value,
                expected: "finite values on (a, b)",
            });
        }
        let target = tol.max(64.0 * f64::EPSILON * abs);
        if error <= target {
            return Ok(QuadratureResult {
                value,
                error_estimate: error,
                evaluations,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if heap.len() + 2 > MAX_INTERVALS || mid <= worst.lo || mid >= worst.hi {
            return Err(Error::NonConvergence {
                a,
                b,
                intervals: heap.len() + 1,
                error_estimate: error,
            });
        }
        heap.push(gauss_kronrod(&f, worst.map, worst.lo, mid));
        heap.push(gauss_kronrod(&f, worst.map, mid, worst.hi));
        evaluations += 30;
    }
}

/// Finds `x` in `bracket` with `|f(x) - target| <= tol` for monotone `f`.
///
/// Uses Brent's method, which keeps a sign-changing bracket at every step and
/// therefore always converges. Iteration also stops when the bracket has
/// shrunk to a few ulps, which is the best attainable answer when `tol` is
/// below the rounding level of `f`.
pub fn solve_monotone<F: Fn(f64) -> f64>(
    f: F,
    target: f64,
    bracket: (f64, f64),
    tol: f64,
) -> Result<f64> {
    let (mut a, mut b) = bracket;
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::Domain {
            what: "bracket",
            value: b - a,
            expected: "finite lo <= hi",
        });
    }
    let mut fa = f(a) - target;
    let mut fb = f(b) - target;
    if fa.abs() <= tol {
        return Ok(a);
    }
    if fb.abs() <= tol {
        return Ok(b);
    }
    if fa.is_nan() || fb.is_nan() || fa.signum() == fb.signum() {
        return Err(Error::Bracket {
            target,
            lo: a,
            hi: b,
            f_lo: fa + target,
            f_hi: fb + target,
        });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ROOT_ITERATIONS {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let xtol = 2.0 * f64::EPSILON * b.abs() + f64::MIN_POSITIVE;
        let m = 0.5 * (c - b);
        if fb.abs() <= tol || m.abs() <= xtol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= xtol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (xtol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > xtol { d } else { xtol.copysign(m) };
        fb = f(b) - target;
    }
    Err(Error::NonConvergence {
        a: bracket.0,
        b: bracket.1,
        intervals: MAX_ROOT_ITERATIONS,
        error_estimate: fb.abs(),
    })
}
