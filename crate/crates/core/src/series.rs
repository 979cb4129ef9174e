//! Truncated Laurent series over double-precision complex coefficients.
//!
//! A [`TruncatedSeries`] stores a contiguous coefficient window
//! `a_min_deg ..= a_max_deg`; everything outside the window is zero. Every
//! series carries an [`EvalDomain`] bounding the arguments at which the
//! truncation is trusted.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default truncation order for entire-function generators.
pub const DEFAULT_TRUNCATION: usize = 64;

/// Highest degree kept by [`TruncatedSeries::mul`].
pub const PRODUCT_DEGREE_CAP: i64 = 256;

/// Evaluation radius for entire-function series (exp and friends).
pub const ENTIRE_DOMAIN: f64 = 4.0;

/// Evaluation radius for geometric-type series.
pub const GEOMETRIC_DOMAIN: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalDomain {
    pub max_abs_arg: f64,
}

impl EvalDomain {
    pub fn new(max_abs_arg: f64) -> Self {
        Self { max_abs_arg }
    }

    pub fn check(&self, z: Complex64) -> Result<()> {
        let abs = z.norm();
        if abs > self.max_abs_arg || abs.is_nan() {
            return Err(Error::Domain {
                abs,
                max: self.max_abs_arg,
            });
        }
        Ok(())
    }

    fn narrowest(self, other: EvalDomain) -> EvalDomain {
        EvalDomain::new(self.max_abs_arg.min(other.max_abs_arg))
    }
}

impl Default for EvalDomain {
    fn default() -> Self {
        Self::new(ENTIRE_DOMAIN)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    min_deg: i64,
    coeffs: Vec<Complex64>,
    label: Option<String>,
    domain: EvalDomain,
}

/// Wire form: `{"min_deg": int, "coeffs": [[re, im], ...], "label": string?}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesJson {
    pub min_deg: i64,
    pub coeffs: Vec<Complex64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl TruncatedSeries {
    /// Builds a series from a window start and the coefficients in window order.
    pub fn new(min_deg: i64, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Invalid("series window is empty".into()));
        }
        for (i, c) in coeffs.iter().enumerate() {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::NonFinite(min_deg + i as i64));
            }
        }
        Ok(Self {
            min_deg,
            coeffs,
            label: None,
            domain: EvalDomain::default(),
        })
    }

    /// Builds a series from `(degree, value)` pairs; unspecified interior
    /// degrees are zero. An empty list gives the zero constant.
    pub fn from_terms(terms: &[(i64, Complex64)]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for &(d, v) in terms {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite(d));
            }
            if map.insert(d, v).is_some() {
                return Err(Error::DuplicateDegree(d));
            }
        }
        let (Some(&lo), Some(&hi)) = (map.keys().next(), map.keys().next_back()) else {
            return Self::new(0, vec![Complex64::new(0.0, 0.0)]);
        };
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (d, v) in map {
            coeffs[(d - lo) as usize] = v;
        }
        Self::new(lo, coeffs)
    }

    pub fn monomial(degree: i64, value: Complex64) -> Result<Self> {
        Self::new(degree, vec![value])
    }

    /// `exp` truncated at degree `n`: `a_k = 1/k!`.
    pub fn exp(n: usize) -> Self {
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut term = 1.0;
        for k in 0..=n {
            if k > 0 {
                term /= k as f64;
            }
            coeffs.push(Complex64::new(term, 0.0));
        }
        Self {
            min_deg: 0,
            coeffs,
            label: Some("exp".into()),
            domain: EvalDomain::new(ENTIRE_DOMAIN),
        }
    }

    /// `1/(1-z)` truncated at degree `n`.
    pub fn geometric(n: usize) -> Self {
        Self {
            min_deg: 0,
            coeffs: vec![Complex64::new(1.0, 0.0); n + 1],
            label: Some("geometric".into()),
            domain: EvalDomain::new(GEOMETRIC_DOMAIN),
        }
    }

    pub fn min_deg(&self) -> i64 {
        self.min_deg
    }

    pub fn max_deg(&self) -> i64 {
        self.min_deg + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^degree`; zero outside the window.
    pub fn coeff(&self, degree: i64) -> Complex64 {
        if degree < self.min_deg || degree > self.max_deg() {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[(degree - self.min_deg) as usize]
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.min_deg..=self.max_deg()
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn domain(&self) -> EvalDomain {
        self.domain
    }

    pub fn with_domain(mut self, domain: EvalDomain) -> Self {
        self.domain = domain;
        self
    }

    /// `(S(λ)f)(z) = f(λz)`: coefficient `a_k` becomes `a_k λ^k`.
    pub fn scale_argument(&self, lambda: Complex64) -> Result<Self> {
        if !lambda.re.is_finite() || !lambda.im.is_finite() {
            return Err(Error::Invalid("scale factor must be finite".into()));
        }
        let is_zero = lambda == Complex64::new(0.0, 0.0);
        if is_zero && self.min_deg < 0 {
            return Err(Error::ZeroScale);
        }
        let coeffs = self
            .degrees()
            .zip(&self.coeffs)
            .map(|(d, &a)| a * pow_i64(lambda, d))
            .collect();
        let max_abs_arg = if is_zero {
            f64::INFINITY
        } else {
            self.domain.max_abs_arg / lambda.norm()
        };
        Ok(Self {
            min_deg: self.min_deg,
            coeffs,
            label: self.label.clone(),
            domain: EvalDomain::new(max_abs_arg),
        })
    }

    /// Horner evaluation, nonnegative and negative degrees summed separately.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        self.domain.check(z)?;
        self.evaluate_unchecked(z)
    }

    /// Evaluation without the domain guard; negative degrees still need `z != 0`.
    pub fn evaluate_unchecked(&self, z: Complex64) -> Result<Complex64> {
        let zero = Complex64::new(0.0, 0.0);
        let mut total = zero;
        let hi = self.max_deg();
        if hi >= 0 {
            let lo = self.min_deg.max(0);
            let mut acc = zero;
            for d in (lo..=hi).rev() {
                acc = acc * z + self.coeff(d);
            }
            // lowest nonnegative degree may be above zero
            total += acc * pow_i64(z, lo);
        }
        if self.min_deg < 0 {
            if z == zero {
                return Err(Error::ZeroArgument);
            }
            let u = z.inv();
            let top = (-self.min_deg) as usize;
            let first = (-hi).max(1) as usize;
            let mut acc = zero;
            for j in (first..=top).rev() {
                acc = acc * u + self.coeff(-(j as i64));
            }
            total += acc * u.powi(first as i32);
        }
        Ok(total)
    }

    pub fn add(&self, other: &Self) -> Self {
        let lo = self.min_deg.min(other.min_deg);
        let hi = self.max_deg().max(other.max_deg());
        let coeffs = (lo..=hi).map(|d| self.coeff(d) + other.coeff(d)).collect();
        Self {
            min_deg: lo,
            coeffs,
            label: None,
            domain: self.domain.narrowest(other.domain),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Product truncated to degrees `min1+min2 ..= min(max1+max2, 256)`.
    pub fn mul(&self, other: &Self) -> Self {
        let lo = self.min_deg + other.min_deg;
        let hi = (self.max_deg() + other.max_deg())
            .min(PRODUCT_DEGREE_CAP)
            .max(lo);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (d1, &a) in self.degrees().zip(&self.coeffs) {
            for (d2, &b) in other.degrees().zip(&other.coeffs) {
                let d = d1 + d2;
                if d > hi {
                    break;
                }
                coeffs[(d - lo) as usize] += a * b;
            }
        }
        Self {
            min_deg: lo,
            coeffs,
            label: None,
            domain: self.domain.narrowest(other.domain),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            min_deg: self.min_deg,
            coeffs: self.coeffs.iter().map(|&a| a * c).collect(),
            label: self.label.clone(),
            domain: self.domain,
        }
    }

    /// Term-by-term `d/dz`. The constant term disappears; a lone constant
    /// differentiates to the zero constant.
    pub fn derivative(&self) -> Self {
        let terms: Vec<(i64, Complex64)> = self
            .degrees()
            .zip(&self.coeffs)
            .filter(|(d, _)| *d != 0)
            .map(|(d, &a)| (d - 1, a * d as f64))
            .collect();
        self.rebuild_from(terms)
    }

    /// Rebuilds a series over the contiguous span of the given (sorted, distinct) terms,
    /// keeping this series' domain.
    pub(crate) fn rebuild_from(&self, terms: Vec<(i64, Complex64)>) -> Self {
        let (lo, hi) = match (terms.first(), terms.last()) {
            (Some(f), Some(l)) => (f.0, l.0),
            _ => (0, 0),
        };
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (d, v) in terms {
            coeffs[(d - lo) as usize] = v;
        }
        Self {
            min_deg: lo,
            coeffs,
            label: None,
            domain: self.domain,
        }
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            min_deg: self.min_deg,
            coeffs: self.coeffs.clone(),
            label: self.label.clone(),
        }
    }

    pub fn from_json(json: SeriesJson) -> Result<Self> {
        let mut s = Self::new(json.min_deg, json.coeffs)?;
        s.label = json.label;
        Ok(s)
    }

    /// Largest coefficient difference over the union of both windows.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let lo = self.min_deg.min(other.min_deg);
        let hi = self.max_deg().max(other.max_deg());
        (lo..=hi)
            .map(|d| (self.coeff(d) - other.coeff(d)).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// `z^k` for any integer `k`, with `0^0 = 1`.
pub fn pow_i64(z: Complex64, k: i64) -> Complex64 {
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if k > 0 {
        z.powu(k as u32)
    } else {
        z.inv().powu((-k) as u32)
    }
}
