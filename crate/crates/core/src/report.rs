use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Which side of the tolerance counts as a pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// The identity holds: `residual <= tolerance`.
    #[default]
    Upper,
    /// The identity is expected to break: `residual > tolerance`.
    Lower,
}

impl Bound {
    fn is_upper(&self) -> bool {
        *self == Bound::Upper
    }
}

/// Outcome of one numerical identity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub params: Value,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Bound::is_upper")]
    pub bound: Bound,
}

impl IdentityReport {
    pub fn upper(
        identity: impl Into<String>,
        params: Value,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        Self::with_bound(identity, params, residual, tolerance, Bound::Upper)
    }

    pub fn lower(
        identity: impl Into<String>,
        params: Value,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        Self::with_bound(identity, params, residual, tolerance, Bound::Lower)
    }

    fn with_bound(
        identity: impl Into<String>,
        params: Value,
        residual: f64,
        tolerance: f64,
        bound: Bound,
    ) -> Self {
        let mut report = Self {
            identity: identity.into(),
            params,
            residual,
            tolerance,
            pass: false,
            bound,
        };
        report.pass = report.evaluate();
        report
    }

    /// A report for a check that could not be computed at all.
    pub fn failed(
        identity: impl Into<String>,
        mut params: Value,
        tolerance: f64,
        reason: String,
    ) -> Self {
        if let Value::Object(map) = &mut params {
            map.insert("error".into(), Value::String(reason));
        }
        Self::upper(identity, params, f64::INFINITY, tolerance)
    }

    fn evaluate(&self) -> bool {
        if self.residual.is_nan() {
            return false;
        }
        match self.bound {
            Bound::Upper => self.residual <= self.tolerance,
            Bound::Lower => self.residual > self.tolerance,
        }
    }

    /// Replaces the tolerance of an upper-bound report and recomputes `pass`.
    /// Lower-bound thresholds are part of the claim and stay fixed.
    pub fn override_tolerance(&mut self, tolerance: f64) {
        if self.bound == Bound::Upper {
            self.tolerance = tolerance;
            self.pass = self.evaluate();
        }
    }
}

/// `|a - b| / max(1, |b|)`.
pub fn rel_residual(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

/// JSON `[re, im]`.
pub fn cjson(z: Complex64) -> Value {
    serde_json::json!([z.re, z.im])
}
