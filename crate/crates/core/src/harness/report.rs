use serde::Serialize;

use crate::confvol::ConformalVolumeResult;

/// Additive slack granted to a report for discretization effects.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ErrorBars {
    /// From eigenpair residuals.
    pub spectral: f64,
    /// From non-conformality of the discrete map.
    pub distortion: f64,
    /// From faces excluded as singular.
    pub singular: f64,
    /// From quadrature (spherical vs chordal image area).
    pub quadrature: f64,
    /// Floating-point rounding, set by [`InequalityReport::new`].
    pub rounding: f64,
}

/// Rounding slack relative to the smaller side of a report.
pub const ROUNDING_REL: f64 = 1e-12;

impl ErrorBars {
    pub fn total(&self) -> f64 {
        self.spectral + self.distortion + self.singular + self.quadrature + self.rounding
    }

    /// True when nothing but rounding is granted.
    pub fn is_zero(&self) -> bool {
        self.spectral + self.distortion + self.singular + self.quadrature == 0.0
    }
}

/// One instance of an inequality `lhs <= rhs`.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityReport {
    pub name: String,
    pub fixture: String,
    pub k: Option<usize>,
    pub lhs: f64,
    pub lhs_note: String,
    pub rhs: f64,
    pub rhs_note: String,
    /// `rhs - lhs`.
    pub slack: f64,
    pub error_bars: ErrorBars,
    /// `lhs <= rhs + error_bars.total()`.
    pub passed: bool,
    /// False when the test direction is weakened by an estimated input.
    pub conclusive: bool,
    pub notes: Vec<String>,
}

impl InequalityReport {
    pub fn new(
        name: &str,
        fixture: &str,
        (lhs, lhs_note): (f64, &str),
        (rhs, rhs_note): (f64, &str),
        mut error_bars: ErrorBars,
    ) -> Self {
        error_bars.rounding = ROUNDING_REL * lhs.abs().min(rhs.abs());
        let passed = lhs <= rhs + error_bars.total();
        InequalityReport {
            name: name.to_string(),
            fixture: fixture.to_string(),
            k: None,
            lhs,
            lhs_note: lhs_note.to_string(),
            rhs,
            rhs_note: rhs_note.to_string(),
            slack: rhs - lhs,
            error_bars,
            passed,
            conclusive: true,
            notes: Vec::new(),
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }

    pub fn inconclusive(mut self, why: impl Into<String>) -> Self {
        self.conclusive = false;
        self.notes.push(why.into());
        self
    }

    /// `|lhs - rhs| / |rhs|`, for equality cases.
    pub fn relative_gap(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.rhs.abs()
    }

    /// A failure with no error bars to blame.
    pub fn is_counterexample(&self) -> bool {
        !self.passed && self.error_bars.is_zero()
    }
}

/// A conformal-volume value together with its provenance.
#[derive(Debug, Clone, Serialize)]
pub struct VcValue {
    pub value: f64,
    /// Known in closed form, as opposed to an optimizer lower bound.
    pub exact: bool,
    pub source: String,
}

impl VcValue {
    pub fn exact(value: f64, source: &str) -> Self {
        VcValue { value, exact: true, source: source.to_string() }
    }

    pub fn estimate(res: &ConformalVolumeResult) -> Self {
        VcValue {
            value: res.value,
            exact: false,
            source: format!("optimizer lower bound ({} evaluations)", res.evaluations),
        }
    }
}
