use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} = {value} is outside its domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("density ratio decreases between node {index} ({prev}) and node {next_index} ({next})", next_index = .index + 1)]
    Monotonicity { index: usize, prev: f64, next: f64 },

    #[error("invalid density specification: {0}")]
    InvalidDensity(String),

    #[error("invalid set description: {0}")]
    InvalidShape(String),

    #[error("malformed JSON")]
    Json(#[from] serde_json::Error),

    #[error("quadrature on [{a}, {b}] did not converge within {intervals} intervals (error estimate {error_estimate:e})")]
    NonConvergence {
        a: f64,
        b: f64,
        intervals: usize,
        error_estimate: f64,
    },

    #[error("target {target} is not bracketed by f({lo}) = {f_lo} and f({hi}) = {f_hi}")]
    Bracket {
        target: f64,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("{what} = {value} exceeds the computable range (max {max})")]
    Range {
        what: &'static str,
        value: f64,
        max: f64,
    },

    #[error("|u| reaches 1 at interior point tau = {tau}")]
    SingularInterior { tau: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("competitor {index} has volume {volume}, expected {expected}")]
    VolumeMismatch {
        index: usize,
        volume: f64,
        expected: f64,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure_radius(what: &'static str, t: f64) -> Result<()> {
    if t.is_finite() && (0.0..1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value: t,
            expected: "[0, 1)",
        })
    }
}

pub(crate) fn ensure_interval(a: f64, b: f64) -> Result<()> {
    ensure_radius("a", a)?;
    ensure_radius("b", b)?;
    if a < b {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "b",
            value: b,
            expected: "b > a",
        })
    }
}
