//! Named inequality checks and their JSON encoding.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    ReportOnly,
    HypothesisViolated,
}

/// One check. `slack` is oriented so that the check passes iff
/// `slack >= -tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn graded(name: impl Into<String>, lhs: f64, rhs: f64, slack: f64, tolerance: f64) -> Self {
        let verdict = if slack >= -tolerance {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Check {
            name: name.into(),
            lhs,
            rhs,
            slack,
            tolerance,
            verdict,
            note: None,
        }
    }

    /// `lhs <= rhs + tolerance`
    pub fn at_most(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::graded(name, lhs, rhs, rhs - lhs, tolerance)
    }

    /// `lhs >= rhs - tolerance`
    pub fn at_least(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::graded(name, lhs, rhs, lhs - rhs, tolerance)
    }

    /// `|lhs - rhs| <= tolerance`
    pub fn equal(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self::graded(name, lhs, rhs, -(lhs - rhs).abs(), tolerance)
    }

    /// `lhs > rhs + tolerance` (strict, with a margin).
    pub fn exceeds(name: impl Into<String>, lhs: f64, rhs: f64, margin: f64) -> Self {
        let mut c = Self::graded(name, lhs, rhs, lhs - rhs - margin, 0.0);
        c.tolerance = margin;
        if !(lhs - rhs > margin) {
            c.verdict = Verdict::Fail;
        }
        c
    }

    pub fn report_only(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Check {
            name: name.into(),
            lhs,
            rhs,
            slack: lhs - rhs,
            tolerance: 0.0,
            verdict: Verdict::ReportOnly,
            note: None,
        }
    }

    pub fn hypothesis_violated(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Check {
            name: name.into(),
            lhs,
            rhs,
            slack: lhs - rhs,
            tolerance: 0.0,
            verdict: Verdict::HypothesisViolated,
            note: None,
        }
    }

    /// A failed entry for a computation that could not be completed.
    pub fn error(name: impl Into<String>, message: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            slack: f64::NAN,
            tolerance: 0.0,
            verdict: Verdict::Fail,
            note: Some(message.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail)
    }

    /// True when no check failed. Report-only and hypothesis-violated
    /// entries do not count as failures.
    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn count(&self, verdict: Verdict) -> usize {
        self.checks.iter().filter(|c| c.verdict == verdict).count()
    }

    /// Smallest slack among graded checks.
    pub fn min_slack(&self) -> Option<f64> {
        self.checks
            .iter()
            .filter(|c| matches!(c.verdict, Verdict::Pass | Verdict::Fail))
            .map(|c| c.slack)
            .min_by(f64::total_cmp)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        assert!(Check::at_most("a", 1.0, 1.0 + 1e-12, 1e-8).passed());
        assert!(Check::at_most("a", 1.0 + 1e-9, 1.0, 1e-8).passed());
        assert!(!Check::at_most("a", 1.1, 1.0, 1e-8).passed());
        assert!(Check::at_least("b", 2.0, 1.0, 0.0).passed());
        assert!(!Check::equal("c", 2.0, 1.0, 0.5).passed());
        assert!(Check::equal("c", 1.2, 1.0, 0.5).passed());
        assert!(Check::exceeds("d", 1.1, 1.0, 1e-4).passed());
        assert!(!Check::exceeds("d", 1.0, 1.0, 1e-4).passed());
    }

    #[test]
    fn json_schema() {
        let mut r = VerificationReport::new();
        r.push(Check::at_most("x", 1.0, 2.0, 1e-8));
        r.push(Check::report_only("y", 1.0, 2.0));
        r.push(Check::hypothesis_violated("z", 0.5, 1.0));
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let checks = v["checks"].as_array().unwrap();
        assert_eq!(checks.len(), 3);
        for key in ["name", "lhs", "rhs", "slack", "tolerance", "verdict"] {
            assert!(checks[0].get(key).is_some(), "{key}");
        }
        assert_eq!(checks[0]["verdict"], "pass");
        assert_eq!(checks[1]["verdict"], "report-only");
        assert_eq!(checks[2]["verdict"], "hypothesis-violated");
        assert!(r.all_passed());
        let back: VerificationReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
