//! Hyperbolic primitives on the Poincaré disc and the radial log-convex
//! density model.
//!
//! The disc carries the conformal factor `ζ(t) = 2 / (1 - t²)`. A density
//! `ψ = e^h` is described through the ratio `λ = h' / ζ`, which must be
//! non-negative and non-decreasing; this is exactly convexity of `h` along
//! hyperbolic radial distance. `λ` is piecewise linear between nodes and
//! constant outside them, so `h` has a closed form on every piece.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_radius, Error, Result};

#[inline]
pub(crate) fn zeta_at(t: f64) -> f64 {
    2.0 / ((1.0 - t) * (1.0 + t))
}

/// Conformal factor of the Poincaré disc, `2 / (1 - t²)`.
pub fn zeta(t: f64) -> Result<f64> {
    ensure_radius("t", t)?;
    Ok(zeta_at(t))
}

/// Hyperbolic distance from the origin of a point at Euclidean radius `t`.
pub fn phi(t: f64) -> Result<f64> {
    ensure_radius("t", t)?;
    Ok(2.0 * t.atanh())
}

/// Euclidean radius at hyperbolic distance `s` from the origin.
pub fn phi_inv(s: f64) -> Result<f64> {
    if !(s.is_finite() && s >= 0.0) {
        return Err(Error::Domain {
            what: "s",
            value: s,
            expected: "[0, inf)",
        });
    }
    Ok((0.5 * s).tanh())
}

#[inline]
pub(crate) fn rho_hat_at(t: f64) -> f64 {
    t * zeta_at(t)
}

/// Logarithmic derivative `ζ'/ζ = tζ` of the conformal factor.
pub fn rho_hat(t: f64) -> Result<f64> {
    ensure_radius("t", t)?;
    Ok(rho_hat_at(t))
}

/// `φ(y) - φ(x)` without cancellation.
#[inline]
fn phi_increment(x: f64, y: f64) -> f64 {
    phi_step(x, y, y - x)
}

/// `φ(y) - φ(x)` with the difference `dx = y - x` supplied exactly.
#[inline]
fn phi_step(x: f64, y: f64, dx: f64) -> f64 {
    2.0 * (dx / (1.0 - x * y)).atanh()
}

/// `ln(1 - x²) - ln(1 - y²)` without cancellation.
#[inline]
fn log_conformal_increment(x: f64, y: f64) -> f64 {
    log_conformal_step(x, y, y - x)
}

#[inline]
pub(crate) fn log_conformal_step(x: f64, y: f64, dx: f64) -> f64 {
    (dx * (y + x) / ((1.0 - y) * (1.0 + y))).ln_1p()
}

/// One-sided limit selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DensityDocument {
    lambda_nodes: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "is_zero")]
    log_scale: f64,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

/// A radial log-convex density on the disc.
///
/// Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DensitySpec {
    radii: Vec<f64>,
    values: Vec<f64>,
    /// `∫₀^{radii[k]} λζ`
    h_at_nodes: Vec<f64>,
    log_scale: f64,
}

impl DensitySpec {
    /// Validates `(radius, λ)` nodes and builds the density with `h(0) = 0`.
    pub fn new(nodes: &[(f64, f64)]) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidDensity("no lambda nodes".into()));
        }
        for (i, &(t, v)) in nodes.iter().enumerate() {
            if !(t.is_finite() && (0.0..1.0).contains(&t)) {
                return Err(Error::Domain {
                    what: "node radius",
                    value: t,
                    expected: "[0, 1)",
                });
            }
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Domain {
                    what: "node value",
                    value: v,
                    expected: "finite and >= 0",
                });
            }
            if i > 0 {
                let (tp, vp) = nodes[i - 1];
                if t <= tp {
                    return Err(Error::InvalidDensity(format!(
                        "node radii must be strictly increasing (node {} at {} follows {})",
                        i, t, tp
                    )));
                }
                if v < vp {
                    return Err(Error::Monotonicity {
                        index: i - 1,
                        prev: vp,
                        next: v,
                    });
                }
            }
        }
        let radii: Vec<f64> = nodes.iter().map(|n| n.0).collect();
        let values: Vec<f64> = nodes.iter().map(|n| n.1).collect();
        let mut spec = DensitySpec {
            h_at_nodes: vec![0.0; radii.len()],
            radii,
            values,
            log_scale: 0.0,
        };
        let mut acc = spec.values[0] * 2.0 * spec.radii[0].atanh();
        spec.h_at_nodes[0] = acc;
        for k in 1..spec.radii.len() {
            acc += spec.piece_increment(k, spec.radii[k - 1], spec.radii[k]);
            spec.h_at_nodes[k] = acc;
        }
        Ok(spec)
    }

    /// The unweighted hyperbolic plane, `λ ≡ 0`.
    pub fn unweighted() -> Self {
        Self::new(&[(0.0, 0.0)]).expect("valid")
    }

    /// Constant ratio `λ ≡ c`, i.e. `ψ = e^{cφ}`.
    pub fn constant(c: f64) -> Result<Self> {
        Self::new(&[(0.0, c)])
    }

    /// Parses `{"lambda_nodes": [[t, v], ...]}` and enforces the invariants.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: DensityDocument = serde_json::from_str(text)?;
        let nodes: Vec<(f64, f64)> = doc.lambda_nodes.iter().map(|n| (n[0], n[1])).collect();
        let spec = Self::new(&nodes)?;
        spec.with_log_scale(doc.log_scale)
    }

    pub fn to_json(&self) -> String {
        let doc = DensityDocument {
            lambda_nodes: self.nodes().map(|(t, v)| [t, v]).collect(),
            log_scale: self.log_scale,
        };
        serde_json::to_string(&doc).expect("plain numbers serialize")
    }

    /// The same density multiplied by `e^c`.
    pub fn with_log_scale(mut self, c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::Domain {
                what: "log_scale",
                value: c,
                expected: "finite",
            });
        }
        self.log_scale = c;
        Ok(self)
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.radii.iter().copied().zip(self.values.iter().copied())
    }

    /// Radii at which `λ` has kinks; useful as quadrature breakpoints.
    pub fn breakpoints(&self) -> &[f64] {
        &self.radii
    }

    /// Number of nodes with radius `<= t`.
    #[inline]
    fn piece(&self, t: f64) -> usize {
        self.radii.partition_point(|&r| r <= t)
    }

    /// `∫_x^y λζ` for `x <= y` inside piece `k`.
    #[inline]
    fn piece_increment(&self, k: usize, x: f64, y: f64) -> f64 {
        let n = self.radii.len();
        if k == 0 {
            self.values[0] * phi_increment(x, y)
        } else if k == n {
            self.values[n - 1] * phi_increment(x, y)
        } else {
            let (t0, t1) = (self.radii[k - 1], self.radii[k]);
            let (v0, v1) = (self.values[k - 1], self.values[k]);
            let slope = (v1 - v0) / (t1 - t0);
            let intercept = v0 - slope * t0;
            intercept * phi_increment(x, y) + slope * log_conformal_increment(x, y)
        }
    }

    /// `λ(t)`, continuous and piecewise linear.
    #[inline]
    pub fn ratio(&self, t: f64) -> f64 {
        let n = self.radii.len();
        let k = self.piece(t);
        if k == 0 {
            self.values[0]
        } else if k == n {
            self.values[n - 1]
        } else {
            let (t0, t1) = (self.radii[k - 1], self.radii[k]);
            let (v0, v1) = (self.values[k - 1], self.values[k]);
            v0 + (v1 - v0) * (t - t0) / (t1 - t0)
        }
    }

    /// One-sided limit `λ(t±)`. Piecewise-linear `λ` is continuous, so both
    /// sides agree; the side only matters for the domain check.
    pub fn ratio_one_sided(&self, t: f64, side: Side) -> Result<f64> {
        ensure_radius("t", t)?;
        if side == Side::Minus && t <= 0.0 {
            return Err(Error::Domain {
                what: "t",
                value: t,
                expected: "t > 0 for a left limit",
            });
        }
        Ok(self.ratio(t))
    }

    /// `∫_x^y λζ dτ` for `0 <= x <= y < 1`, summed piece by piece.
    pub(crate) fn h_increment(&self, x: f64, y: f64) -> f64 {
        let mut k = self.piece(x);
        let kmax = self.piece(y);
        let mut lo = x;
        let mut acc = 0.0;
        while k < kmax {
            let hi = self.radii[k];
            acc += self.piece_increment(k, lo, hi);
            lo = hi;
            k += 1;
        }
        acc + self.piece_increment(k, lo, y)
    }

    /// `h(x + dx) - h(x)` for an offset `dx` of either sign that may be
    /// far below the spacing of floats near `x`.
    pub(crate) fn h_step(&self, x: f64, dx: f64) -> f64 {
        let y = x + dx;
        // a node at `x` belongs to the piece the offset points into
        let k = if dx >= 0.0 {
            self.piece(x)
        } else {
            self.radii.partition_point(|&r| r < x)
        };
        let n = self.radii.len();
        let lo = if k == 0 {
            f64::NEG_INFINITY
        } else {
            self.radii[k - 1]
        };
        let hi = if k == n { f64::INFINITY } else { self.radii[k] };
        if !(lo <= x.min(y) && x.max(y) <= hi) {
            return if dx >= 0.0 {
                self.h_increment(x, y)
            } else {
                -self.h_increment(y, x)
            };
        }
        if k == 0 {
            self.values[0] * phi_step(x, y, dx)
        } else if k == n {
            self.values[n - 1] * phi_step(x, y, dx)
        } else {
            let (t0, t1) = (self.radii[k - 1], self.radii[k]);
            let (v0, v1) = (self.values[k - 1], self.values[k]);
            let slope = (v1 - v0) / (t1 - t0);
            let intercept = v0 - slope * t0;
            intercept * phi_step(x, y, dx) + slope * log_conformal_step(x, y, dx)
        }
    }

    #[inline]
    pub(crate) fn h_at(&self, t: f64) -> f64 {
        let k = self.piece(t);
        let base = if k == 0 { 0.0 } else { self.h_at_nodes[k - 1] };
        let from = if k == 0 { 0.0 } else { self.radii[k - 1] };
        self.log_scale + base + self.piece_increment(k, from, t)
    }

    #[inline]
    pub(crate) fn psi_at(&self, t: f64) -> f64 {
        self.h_at(t).exp()
    }

    /// `h(t) = log ψ(t)`; equal to `∫₀ᵗ λζ` under the default normalisation.
    pub fn h_value(&self, t: f64) -> Result<f64> {
        ensure_radius("t", t)?;
        Ok(self.h_at(t))
    }

    pub fn psi(&self, t: f64) -> Result<f64> {
        ensure_radius("t", t)?;
        Ok(self.psi_at(t))
    }

    /// `ϱ±(t) = λ(t±) ζ(t)`.
    pub fn rho(&self, t: f64, side: Side) -> Result<f64> {
        Ok(self.ratio_one_sided(t, side)? * zeta_at(t))
    }

    /// `ρ̃±(t) = ρ̂(t) + ϱ±(t)`.
    pub fn rho_tilde(&self, t: f64, side: Side) -> Result<f64> {
        Ok(rho_hat_at(t) + self.rho(t, side)?)
    }

    #[inline]
    pub(crate) fn rho_tilde_at(&self, t: f64) -> f64 {
        (t + self.ratio(t)) * zeta_at(t)
    }

    /// `R = inf{t : λ(t) > 0}`, or `1` when `λ ≡ 0`.
    pub fn first_positive_radius(&self) -> f64 {
        if self.values[0] > 0.0 {
            return 0.0;
        }
        match self.values.iter().position(|&v| v > 0.0) {
            Some(i) => self.radii[i - 1],
            None => 1.0,
        }
    }

    /// Whether `ϱ ≡ 0` on `[a, b)`.
    pub fn vanishes_on(&self, a: f64, b: f64) -> bool {
        debug_assert!(a < b);
        b <= self.first_positive_radius()
    }

    pub fn is_unweighted(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate_with_breaks, SingularityHint};
    use proptest::prelude::*;

    fn ramp() -> DensitySpec {
        DensitySpec::new(&[(0.0, 0.0), (0.3, 0.0), (0.9, 2.0)]).unwrap()
    }

    #[test]
    fn zeta_values() {
        assert_eq!(zeta(0.0).unwrap(), 2.0);
        assert!((zeta(0.5).unwrap() - 8.0 / 3.0).abs() < 1e-15);
        assert!((zeta(0.2).unwrap() - 2.0833333333333335).abs() < 1e-15);
        assert!(zeta(1.0).is_err());
        assert!(zeta(-0.1).is_err());
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi(0.0).unwrap(), 0.0);
        assert!((phi(0.5).unwrap() - 3f64.ln()).abs() < 1e-15);
        assert!((phi_inv(3f64.ln()).unwrap() - 0.5).abs() < 1e-15);
        assert!(phi_inv(-1.0).is_err());
    }

    #[test]
    fn rho_hat_values() {
        assert_eq!(rho_hat(0.0).unwrap(), 0.0);
        assert!((rho_hat(0.5).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!((rho_hat(0.2).unwrap() - 0.4166666666666667).abs() < 1e-15);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            DensitySpec::new(&[(0.0, 1.0), (0.5, 0.5)]),
            Err(Error::Monotonicity { index: 0, .. })
        ));
        assert!(DensitySpec::new(&[]).is_err());
        assert!(DensitySpec::new(&[(0.0, -1.0)]).is_err());
        assert!(DensitySpec::new(&[(0.5, 0.0), (0.5, 1.0)]).is_err());
        assert!(DensitySpec::new(&[(1.0, 0.0)]).is_err());
    }

    #[test]
    fn unweighted_density() {
        let d = DensitySpec::unweighted();
        assert_eq!(d.h_value(0.7).unwrap(), 0.0);
        assert_eq!(d.psi(0.7).unwrap(), 1.0);
        assert_eq!(d.first_positive_radius(), 1.0);
    }

    #[test]
    fn constant_ratio_gives_phi() {
        let d = DensitySpec::constant(1.0).unwrap();
        for t in [0.1, 0.35, 0.5, 0.9] {
            assert!((d.h_value(t).unwrap() - phi(t).unwrap()).abs() < 1e-14);
        }
        assert!((d.psi(0.5).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn ramp_rho_values() {
        let d = ramp();
        assert_eq!(d.rho(0.3, Side::Minus).unwrap(), 0.0);
        assert_eq!(d.rho(0.3, Side::Plus).unwrap(), 0.0);
        // λ(0.6) = 1 by interpolation, ζ(0.6) = 3.125
        assert!((d.rho(0.6, Side::Plus).unwrap() - 3.125).abs() < 1e-14);
        assert!((d.rho(0.6, Side::Minus).unwrap() - 3.125).abs() < 1e-14);
        assert!(d.rho(0.0, Side::Minus).is_err());
        assert!((d.rho_tilde(0.6, Side::Plus).unwrap() - (0.6 * 3.125 + 3.125)).abs() < 1e-14);
    }

    #[test]
    fn first_positive_radius_cases() {
        assert_eq!(ramp().first_positive_radius(), 0.3);
        assert_eq!(
            DensitySpec::new(&[(0.0, 0.5)])
                .unwrap()
                .first_positive_radius(),
            0.0
        );
        // left extension is constant at the first value
        assert_eq!(
            DensitySpec::new(&[(0.4, 0.5)])
                .unwrap()
                .first_positive_radius(),
            0.0
        );
        assert_eq!(
            DensitySpec::new(&[(0.4, 0.0), (0.6, 1.0)])
                .unwrap()
                .first_positive_radius(),
            0.4
        );
        assert!(ramp().vanishes_on(0.1, 0.3));
        assert!(!ramp().vanishes_on(0.1, 0.31));
    }

    #[test]
    fn json_round_trip_and_errors() {
        let d =
            DensitySpec::from_json(r#"{"lambda_nodes": [[0, 0], [0.3, 0], [0.9, 2]]}"#).unwrap();
        assert_eq!(d, ramp());
        assert_eq!(DensitySpec::from_json(&d.to_json()).unwrap(), d);
        assert!(matches!(
            DensitySpec::from_json("{\"lambda_nodes\": "),
            Err(Error::Json(_))
        ));
        assert!(matches!(
            DensitySpec::from_json(r#"{"lambda_nodes": [[0, 1], [0.5, 0.5]]}"#),
            Err(Error::Monotonicity { .. })
        ));
        let scaled =
            DensitySpec::from_json(r#"{"lambda_nodes": [[0, 0]], "log_scale": 0.5}"#).unwrap();
        assert_eq!(scaled.psi(0.0).unwrap(), 0.5f64.exp());
    }

    #[test]
    fn closed_form_h_matches_quadrature() {
        let specs = [
            ramp(),
            DensitySpec::new(&[(0.1, 0.2), (0.25, 0.4), (0.5, 0.4), (0.8, 3.0)]).unwrap(),
        ];
        for d in &specs {
            for t in [0.05, 0.2, 0.3, 0.45, 0.7, 0.95] {
                let q = integrate_with_breaks(
                    |x| d.ratio(x) * zeta_at(x),
                    0.0,
                    t,
                    d.breakpoints(),
                    SingularityHint::NONE,
                    1e-13,
                )
                .unwrap();
                assert!((d.h_value(t).unwrap() - q.value).abs() < 1e-12, "t = {t}");
            }
        }
    }

    #[test]
    fn h_increment_matches_difference() {
        let d = ramp();
        for (x, y) in [(0.1, 0.2), (0.2, 0.5), (0.35, 0.95), (0.0, 0.6)] {
            let direct = d.h_at(y) - d.h_at(x);
            assert!((d.h_increment(x, y) - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn h_step_matches_increment() {
        let d = ramp();
        for (x, dx) in [
            (0.1, 0.05),
            (0.2, 0.3),
            (0.5, -0.3),
            (0.6, 1e-3),
            (0.95, -0.01),
            (0.4, -1e-20),
        ] {
            let y = x + dx;
            let direct = if dx >= 0.0 {
                d.h_increment(x, y)
            } else {
                -d.h_increment(y, x)
            };
            assert!((d.h_step(x, dx) - direct).abs() < 1e-13, "{x} {dx}");
        }
        // λ(0.6) ζ(0.6) dx to first order for sub-ulp offsets
        let tiny = 1e-20;
        let expected = d.ratio(0.6) * zeta_at(0.6) * tiny;
        assert!((d.h_step(0.6, tiny) - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn h_step_at_node_uses_the_adjacent_piece() {
        let d = ramp();
        for dx in [-0.05, -1e-3, 1e-3, 0.05] {
            let direct = if dx >= 0.0 {
                d.h_increment(0.3, 0.3 + dx)
            } else {
                -d.h_increment(0.3 + dx, 0.3)
            };
            assert!((d.h_step(0.3, dx) - direct).abs() < 1e-15, "{dx}");
        }
        // below the node λ vanishes, so the step is exactly zero
        assert_eq!(d.h_step(0.3, -1e-20), 0.0);
        assert!(d.h_step(0.9, -1e-20) < 0.0);
    }

    #[test]
    fn psi_normalised_at_origin() {
        for d in [
            ramp(),
            DensitySpec::constant(2.0).unwrap(),
            DensitySpec::unweighted(),
        ] {
            assert_eq!(d.psi(0.0).unwrap(), 1.0);
        }
    }

    proptest! {
        #[test]
        fn zeta_derivative_identity(t in 0.001f64..0.99) {
            let h = 1e-6 * (1.0 - t);
            let fd = (zeta_at(t + h) - zeta_at(t - h)) / (2.0 * h);
            let exact = t * zeta_at(t).powi(2);
            prop_assert!(((fd - exact) / exact).abs() < 1e-6);
        }

        #[test]
        fn hyperbolic_curvature_identity(t in 0.0001f64..0.9999) {
            let lhs = (1.0 + t * rho_hat_at(t)) / (t * zeta_at(t));
            let rhs = 0.5 * (1.0 / t + t);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
        }

        #[test]
        fn phi_round_trip(t in 0.0f64..0.999) {
            prop_assert!((phi_inv(phi(t).unwrap()).unwrap() - t).abs() < 1e-12);
        }

        #[test]
        fn psi_monotone_and_phi_convex(
            raw in proptest::collection::vec((0.0f64..0.95, 0.0f64..2.0), 1..6),
        ) {
            let mut radii: Vec<f64> = raw.iter().map(|p| p.0).collect();
            let mut vals: Vec<f64> = raw.iter().map(|p| p.1).collect();
            radii.sort_by(f64::total_cmp);
            radii.dedup();
            vals.sort_by(f64::total_cmp);
            let nodes: Vec<(f64, f64)> = radii.iter().copied().zip(vals.iter().copied()).collect();
            let d = DensitySpec::new(&nodes).unwrap();
            let grid: Vec<f64> = (0..=200).map(|i| 3.0 * i as f64 / 200.0).collect();
            let logpsi: Vec<f64> = grid.iter().map(|&s| d.h_value(phi_inv(s).unwrap()).unwrap()).collect();
            for w in logpsi.windows(2) {
                prop_assert!(w[1] >= w[0] - 1e-14);
            }
            for w in logpsi.windows(3) {
                prop_assert!(w[0] + w[2] - 2.0 * w[1] >= -1e-10);
            }
        }
    }

    #[test]
    fn curvature_quotient_strictly_decreasing() {
        let q: Vec<f64> = (1..1000)
            .map(|i| {
                let t = i as f64 / 1000.0;
                (1.0 + t * rho_hat_at(t)) / (t * zeta_at(t))
            })
            .collect();
        assert!(q.windows(2).all(|w| w[1] < w[0]));
    }
}
