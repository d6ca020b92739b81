use std::fmt;

use thiserror::Error;

/// Existence conditions for the constructions in this crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// Spiral parameters: `0 < α0 ≤ 8/25`, `0 < θ < π/2`, `r > 0`.
    SpiralDomain,
    /// Point to circle: distance to centre must exceed the radius.
    PointCircle,
    /// S-shape: `r0 + r1 < |C1 − C0|`.
    SShape,
    /// C-shape: `|r1 − r0| < |C1 − C0|` with signed radii, i.e. disjoint circles.
    CShape,
}

impl Condition {
    /// Theorem number the condition comes from, as quoted in user-facing messages.
    pub fn theorem(self) -> u8 {
        match self {
            Condition::SpiralDomain => 1,
            Condition::PointCircle => 2,
            Condition::SShape => 3,
            Condition::CShape => 4,
        }
    }

    pub fn requirement(self) -> &'static str {
        match self {
            Condition::SpiralDomain => "needs 0 < alpha0 <= 8/25 (0.32), 0 < theta < pi/2, r > 0",
            Condition::PointCircle => "needs |C0 - B0| > r",
            Condition::SShape => "needs r0 + r1 < |C1 - C0|",
            Condition::CShape => "needs |r1 - r0| < |C1 - C0| (r1 signed negative)",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Theorem {}: {}", self.theorem(), self.requirement())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter out of domain ({condition}): {detail}")]
    Parameter { condition: Condition, detail: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("vanishing first derivative at t = {t}")]
    Singular { t: f64 },

    #[error("infeasible configuration ({condition}): {detail}")]
    Infeasible { condition: Condition, detail: String },

    #[error("no sign change of the feasibility function on [{lo}, {hi}]")]
    Bracketing { lo: f64, hi: f64 },

    #[error("root finder did not converge after {iterations} iterations")]
    Convergence { iterations: usize },

    #[error("construction inconsistency: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn parameter(detail: impl Into<String>) -> Self {
        Error::Parameter {
            condition: Condition::SpiralDomain,
            detail: detail.into(),
        }
    }

    /// True when the error is a proven infeasibility rather than a failure.
    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::Infeasible { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
