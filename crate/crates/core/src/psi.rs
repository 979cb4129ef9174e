//! ψ-deformation layer: deformed numbers, Jackson/ψ-derivatives, exp_ψ and the
//! ψ-hyperbolic families, the q-Laguerre basic sequence and ψ-binomial checks.
//!
//! A [`PsiSequence`] stores the deformed numbers `n_ψ` once and derives
//! `n_ψ!`, `1/n_ψ!` (the `ψ_n` weights of generating functions) and the
//! ψ-binomials from them. The q-case uses `n_q = 1 + q + … + q^{n-1}`,
//! which equals `(1-q^n)/(1-q)` without the cancellation near `q = 1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cyclic::{project_series, AlphaRoot, CyclicContext};
use crate::error::{Error, Result};
use crate::hyperbolic::{EvalMethod, HyperbolicFamily};
use crate::report::{cjson, rel_residual, IdentityReport};
use crate::series::{EvalDomain, TruncatedSeries, ENTIRE_DOMAIN};

/// Below this modulus a deformed number is treated as zero.
pub const VANISHING_THRESHOLD: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Wire form of a ψ-sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PsiSpec {
    Q {
        q: Complex64,
    },
    /// Deformed numbers `1_ψ, 2_ψ, …` listed explicitly.
    Explicit {
        weights: Vec<Complex64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum PsiKind {
    Classical,
    Q(Complex64),
    Explicit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsiSequence {
    kind: PsiKind,
    numbers: Vec<Complex64>,
    factorials: Vec<Complex64>,
    inv_factorials: Vec<Complex64>,
}

/// `k_q` for any integer `k`: `Σ_{j<k} q^j` for `k ≥ 0`, `-q^k (-k)_q` below zero.
pub fn q_number(q: Complex64, k: i64) -> Complex64 {
    let geometric_sum = |m: u64| (0..m).fold(ZERO, |acc, _| acc * q + ONE);
    if k >= 0 {
        geometric_sum(k as u64)
    } else {
        -q.powi(k as i32) * geometric_sum((-k) as u64)
    }
}

impl PsiSequence {
    /// `n_ψ = n`.
    pub fn classical(cap: usize) -> Self {
        let numbers = (0..=cap).map(|n| Complex64::new(n as f64, 0.0)).collect();
        Self::from_numbers(PsiKind::Classical, numbers)
    }

    /// `n_ψ = n_q`; rejects `q = 1` and any `q` making some `n_q` vanish up to `cap`.
    pub fn q(q: Complex64, cap: usize) -> Result<Self> {
        if q == ONE {
            return Err(Error::QIsOne);
        }
        if !q.re.is_finite() || !q.im.is_finite() {
            return Err(Error::Invalid("q must be finite".into()));
        }
        let numbers: Vec<Complex64> = (0..=cap).map(|n| q_number(q, n as i64)).collect();
        Self::validate(&numbers)?;
        Ok(Self::from_numbers(PsiKind::Q(q), numbers))
    }

    /// Explicit deformed numbers `1_ψ, …, cap_ψ`.
    pub fn explicit(weights: Vec<Complex64>) -> Result<Self> {
        let mut numbers = Vec::with_capacity(weights.len() + 1);
        numbers.push(ZERO);
        numbers.extend(weights);
        if numbers
            .iter()
            .any(|w| !w.re.is_finite() || !w.im.is_finite())
        {
            return Err(Error::Invalid("psi weights must be finite".into()));
        }
        Self::validate(&numbers)?;
        Ok(Self::from_numbers(PsiKind::Explicit, numbers))
    }

    pub fn from_spec(spec: PsiSpec, cap: usize) -> Result<Self> {
        match spec {
            PsiSpec::Q { q } => Self::q(q, cap),
            PsiSpec::Explicit { weights } => Self::explicit(weights),
        }
    }

    fn validate(numbers: &[Complex64]) -> Result<()> {
        match numbers
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, v)| v.norm() <= VANISHING_THRESHOLD)
        {
            Some((n, _)) => Err(Error::VanishingPsiNumber(n)),
            None => Ok(()),
        }
    }

    fn from_numbers(kind: PsiKind, numbers: Vec<Complex64>) -> Self {
        let mut factorials = Vec::with_capacity(numbers.len());
        let mut inv_factorials = Vec::with_capacity(numbers.len());
        factorials.push(ONE);
        inv_factorials.push(ONE);
        for n in 1..numbers.len() {
            factorials.push(factorials[n - 1] * numbers[n]);
            inv_factorials.push(inv_factorials[n - 1] / numbers[n]);
        }
        Self {
            kind,
            numbers,
            factorials,
            inv_factorials,
        }
    }

    pub fn kind(&self) -> &PsiKind {
        &self.kind
    }

    pub fn cap(&self) -> usize {
        self.numbers.len() - 1
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.cap() {
            return Err(Error::PsiCap {
                index: n,
                cap: self.cap(),
            });
        }
        Ok(())
    }

    /// `n_ψ`
    pub fn number(&self, n: usize) -> Result<Complex64> {
        self.check(n)?;
        Ok(self.numbers[n])
    }

    /// `n_ψ!`, may overflow to infinity for fast-growing sequences.
    pub fn factorial(&self, n: usize) -> Result<Complex64> {
        self.check(n)?;
        Ok(self.factorials[n])
    }

    /// `1/n_ψ!`, i.e. the generating-function weight `ψ_n`.
    pub fn inv_factorial(&self, n: usize) -> Result<Complex64> {
        self.check(n)?;
        Ok(self.inv_factorials[n])
    }

    /// `n_ψ (n-1)_ψ … (n-k+1)_ψ`
    pub fn falling(&self, n: usize, k: usize) -> Result<Complex64> {
        self.check(n)?;
        if k > n {
            return Ok(ZERO);
        }
        Ok(((n - k + 1)..=n).fold(ONE, |acc, j| acc * self.numbers[j]))
    }

    /// `(n choose k)_ψ`, built as a product of ratios to stay finite.
    pub fn binomial(&self, n: usize, k: usize) -> Result<Complex64> {
        self.check(n)?;
        if k > n {
            return Ok(ZERO);
        }
        Ok((0..k).fold(ONE, |acc, i| {
            acc * self.numbers[n - i] / self.numbers[k - i]
        }))
    }

    /// Convergence-safe evaluation radius for `exp_ψ` truncated at `trunc`.
    fn exp_domain(&self, trunc: usize) -> EvalDomain {
        if trunc == 0 {
            return EvalDomain::new(ENTIRE_DOMAIN);
        }
        EvalDomain::new(ENTIRE_DOMAIN.min(0.9 * self.numbers[trunc].norm()))
    }
}

pub fn psi_number(ps: &PsiSequence, n: usize) -> Result<Complex64> {
    ps.number(n)
}

pub fn psi_factorial(ps: &PsiSequence, n: usize) -> Result<Complex64> {
    ps.factorial(n)
}

pub fn psi_binomial(ps: &PsiSequence, n: usize, k: usize) -> Result<Complex64> {
    ps.binomial(n, k)
}

/// `∂_q` on a Laurent series: `a_k z^k ↦ k_q a_k z^{k-1}`.
pub fn jackson_derivative(s: &TruncatedSeries, q: Complex64) -> Result<TruncatedSeries> {
    if q == ONE {
        return Err(Error::QIsOne);
    }
    let terms = s
        .degrees()
        .filter(|&d| d != 0)
        .map(|d| (d - 1, s.coeff(d) * q_number(q, d)))
        .collect();
    Ok(s.rebuild_from(terms))
}

/// `(φ(x) - φ(qx)) / ((1-q)x)` evaluated directly.
pub fn jackson_difference_quotient(
    s: &TruncatedSeries,
    q: Complex64,
    x: Complex64,
) -> Result<Complex64> {
    if q == ONE {
        return Err(Error::QIsOne);
    }
    if x == ZERO {
        return Err(Error::ZeroArgument);
    }
    Ok((s.evaluate(x)? - s.evaluate(q * x)?) / ((ONE - q) * x))
}

/// `(Qφ)(z) = φ(qz)`.
pub fn q_dilation(s: &TruncatedSeries, q: Complex64) -> Result<TruncatedSeries> {
    s.scale_argument(q)
}

/// `∂_ψ` on a power series: `a_k z^k ↦ k_ψ a_k z^{k-1}`.
pub fn psi_derivative(s: &TruncatedSeries, ps: &PsiSequence) -> Result<TruncatedSeries> {
    if s.min_deg() < 0 {
        return Err(Error::NegativeDegree(s.min_deg()));
    }
    let terms = s
        .degrees()
        .filter(|&d| d != 0)
        .map(|d| Ok((d - 1, s.coeff(d) * ps.number(d as usize)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(s.rebuild_from(terms))
}

/// `exp_ψ` truncated at `trunc`: `a_k = 1/k_ψ!`.
pub fn series_exp_psi(ps: &PsiSequence, trunc: usize) -> Result<TruncatedSeries> {
    let coeffs = (0..=trunc)
        .map(|k| ps.inv_factorial(k))
        .collect::<Result<Vec<_>>>()?;
    Ok(TruncatedSeries::new(0, coeffs)?
        .with_label("exp_psi")
        .with_domain(ps.exp_domain(trunc)))
}

/// `h_{ψ,s}^α = Π_s^α exp_ψ` for every class.
pub fn build_psi_hyperbolic(
    ps: &PsiSequence,
    ctx: &CyclicContext,
    a: &AlphaRoot,
    trunc: usize,
) -> Result<HyperbolicFamily> {
    if trunc < ctx.n() {
        return Err(Error::Truncation { trunc, n: ctx.n() });
    }
    let base = series_exp_psi(ps, trunc)?;
    HyperbolicFamily::from_generator(ctx.clone(), a, base, false)
}

/// Dense polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::new(vec![ZERO])
    }

    pub fn one() -> Self {
        Self::new(vec![ONE])
    }

    pub fn monomial(k: usize) -> Self {
        let mut c = vec![ZERO; k + 1];
        c[k] = ONE;
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == ZERO
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * x + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `p(qx)`
    pub fn dilate(&self, q: Complex64) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &a)| a * q.powu(k as u32))
                .collect(),
        )
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_series(&self) -> TruncatedSeries {
        TruncatedSeries::new(0, self.coeffs.clone())
            .expect("polynomial coefficients are finite")
            .with_domain(EvalDomain::new(f64::INFINITY))
    }
}

/// `∂_ψ` on a polynomial.
pub fn poly_psi_derivative(p: &Polynomial, ps: &PsiSequence) -> Result<Polynomial> {
    if p.degree() == 0 {
        return Ok(Polynomial::zero());
    }
    let coeffs = (1..=p.degree())
        .map(|k| Ok(p.coeff(k) * ps.number(k)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(Polynomial::new(coeffs))
}

/// `∂_q` on a polynomial.
pub fn poly_jackson(p: &Polynomial, q: Complex64) -> Result<Polynomial> {
    if q == ONE {
        return Err(Error::QIsOne);
    }
    if p.degree() == 0 {
        return Ok(Polynomial::zero());
    }
    Ok(Polynomial::new(
        (1..=p.degree())
            .map(|k| p.coeff(k) * q_number(q, k as i64))
            .collect(),
    ))
}

/// Laguerre-type basic sequence of `Q(∂_ψ) = -(∂_ψ + ∂_ψ² + …)`:
/// `p_n(x) = Σ_{k=1}^n (-1)^k (n_ψ!/k_ψ!) C(n-1, k-1) x^k`, `p_0 = 1`.
pub fn basic_laguerre(n: usize, ps: &PsiSequence) -> Result<Polynomial> {
    if n == 0 {
        return Ok(Polynomial::one());
    }
    ps.check(n)?;
    let mut coeffs = vec![ZERO; n + 1];
    // classical C(n-1, k-1), updated multiplicatively
    let mut binom = 1.0f64;
    for (k, slot) in coeffs.iter_mut().enumerate().skip(1) {
        if k > 1 {
            binom = binom * (n - k + 1) as f64 / (k - 1) as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        // n_ψ!/k_ψ! = (k+1)_ψ ⋯ n_ψ
        let ratio = ps.falling(n, n - k)?;
        *slot = ratio * (sign * binom);
    }
    Ok(Polynomial::new(coeffs))
}

/// q-Laguerre basic polynomial `L_{n,q}`.
pub fn q_laguerre(n: usize, q: Complex64) -> Result<Polynomial> {
    basic_laguerre(n, &PsiSequence::q(q, n.max(1))?)
}

/// `Q(∂_ψ) p = -Σ_{j=1}^{K} ∂_ψ^j p`; exact once `K ≥ deg p`.
pub fn lowering_operator_apply_psi(
    p: &Polynomial,
    ps: &PsiSequence,
    k: usize,
) -> Result<Polynomial> {
    if k < p.degree() {
        return Err(Error::OperatorTruncation { k, deg: p.degree() });
    }
    let mut acc = Polynomial::zero();
    let mut d = p.clone();
    for _ in 0..k {
        d = poly_psi_derivative(&d, ps)?;
        if d.is_zero() {
            break;
        }
        acc = acc.add(&d);
    }
    Ok(acc.scale(-ONE))
}

pub fn lowering_operator_apply(p: &Polynomial, q: Complex64, k: usize) -> Result<Polynomial> {
    let ps = PsiSequence::q(q, p.degree().max(1))?;
    lowering_operator_apply_psi(p, &ps, k)
}

/// `E^y(∂_ψ) p = Σ_k y^k/k_ψ! ∂_ψ^k p`.
pub fn generalized_translation(
    p: &Polynomial,
    y: Complex64,
    ps: &PsiSequence,
) -> Result<Polynomial> {
    let mut acc = p.clone();
    let mut d = p.clone();
    let mut y_pow = ONE;
    for k in 1..=p.degree() {
        d = poly_psi_derivative(&d, ps)?;
        y_pow *= y;
        acc = acc.add(&d.scale(y_pow * ps.inv_factorial(k)?));
    }
    Ok(acc)
}

/// Residual of `E^y(∂_ψ) p_n(x) = Σ_k (n choose k)_ψ p_k(x) p_{n-k}(y)`, maximized over
/// every `n` in the family.
pub fn verify_psi_binomial(
    family: &[Polynomial],
    ps: &PsiSequence,
    x: Complex64,
    y: Complex64,
) -> Result<IdentityReport> {
    let mut residual = 0.0f64;
    for (n, p) in family.iter().enumerate() {
        let lhs = generalized_translation(p, y, ps)?.eval(x);
        let mut rhs = ZERO;
        for k in 0..=n {
            rhs += ps.binomial(n, k)? * family[k].eval(x) * family[n - k].eval(y);
        }
        residual = residual.max(rel_residual(lhs, rhs));
    }
    Ok(IdentityReport::upper(
        "psi_binomial",
        json!({"x": cjson(x), "y": cjson(y), "max_n": family.len().saturating_sub(1)}),
        residual,
        1e-9,
    ))
}

/// Generating function of the sieved monomials against the ψ-hyperbolic family:
/// `Σ_{m ≤ N} (1/m_ψ!) (Π_s^α x^m)(x) z^m` versus `h_{ψ,s}^α(xz)`.
#[allow(clippy::too_many_arguments)]
pub fn verify_generating_function(
    ps: &PsiSequence,
    ctx: &CyclicContext,
    a: &AlphaRoot,
    s: usize,
    x: Complex64,
    z: Complex64,
    trunc: usize,
) -> Result<IdentityReport> {
    let mut lhs = ZERO;
    let mut z_pow = ONE;
    for m in 0..=trunc {
        let monomial =
            TruncatedSeries::monomial(m as i64, ONE)?.with_domain(EvalDomain::new(f64::INFINITY));
        let projected = project_series(&monomial, ctx, s, a)?;
        lhs += ps.inv_factorial(m)? * projected.evaluate(x)? * z_pow;
        z_pow *= z;
    }
    let family = build_psi_hyperbolic(ps, ctx, a, trunc)?;
    let method = if a.is_zero() {
        EvalMethod::Series
    } else {
        EvalMethod::Closed
    };
    let rhs = family.eval(s, x * z, method)?;
    Ok(IdentityReport::upper(
        "generating_function",
        json!({
            "n": ctx.n(), "s": s % ctx.n(), "alpha": cjson(a.alpha()),
            "x": cjson(x), "z": cjson(z), "trunc": trunc,
        }),
        rel_residual(lhs, rhs),
        1e-9,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn q_numbers_and_binomials() {
        let ps = PsiSequence::q(c(2.0, 0.0), 10).unwrap();
        assert_eq!(ps.number(3).unwrap(), c(7.0, 0.0));
        assert_eq!(ps.number(0).unwrap(), c(0.0, 0.0));
        assert_eq!(ps.factorial(0).unwrap(), c(1.0, 0.0));
        assert!((ps.binomial(4, 2).unwrap() - c(35.0, 0.0)).norm() < 1e-12);
        for n in 0..=10 {
            assert_eq!(ps.binomial(n, 0).unwrap(), c(1.0, 0.0));
        }
        assert!(ps.number(11).is_err());
    }

    #[test]
    fn q_number_matches_closed_form() {
        for &q in &[c(0.5, 0.0), c(2.0, 0.0), c(1.0, 0.3), c(-0.7, 0.2)] {
            for k in -6i64..=12 {
                let closed = (ONE - q.powi(k as i32)) / (ONE - q);
                assert!((q_number(q, k) - closed).norm() <= 1e-12 * closed.norm().max(1.0));
            }
        }
    }

    #[test]
    fn degenerate_q_rejected() {
        assert_eq!(PsiSequence::q(ONE, 5), Err(Error::QIsOne));
        assert_eq!(
            PsiSequence::q(c(-1.0, 0.0), 5),
            Err(Error::VanishingPsiNumber(2))
        );
        let w3 = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        assert_eq!(PsiSequence::q(w3, 5), Err(Error::VanishingPsiNumber(3)));
        // fine while the cap stays below the order of the root
        assert!(PsiSequence::q(w3, 2).is_ok());
        assert!(PsiSequence::explicit(vec![ONE, ZERO]).is_err());
    }

    #[test]
    fn q_near_one_approaches_integers() {
        let ps = PsiSequence::q(c(1.0 + 1e-8, 0.0), 64).unwrap();
        for n in 0..=64 {
            assert!(
                (ps.number(n).unwrap() - c(n as f64, 0.0)).norm() <= 1e-6 * (n as f64).max(1.0)
            );
        }
    }

    #[test]
    fn jackson_examples() {
        let q = c(0.5, 0.0);
        let z3 = TruncatedSeries::monomial(3, ONE).unwrap();
        let d = jackson_derivative(&z3, q).unwrap();
        assert_eq!(d.coeff(2), q_number(q, 3));
        assert_eq!(d.min_deg(), 2);

        let konst = TruncatedSeries::monomial(0, c(4.0, 0.0)).unwrap();
        assert_eq!(jackson_derivative(&konst, q).unwrap().coeffs(), &[ZERO]);

        let ps = PsiSequence::q(q, 40).unwrap();
        let e = series_exp_psi(&ps, 40).unwrap();
        let de = jackson_derivative(&e, q).unwrap();
        let e39 = series_exp_psi(&ps, 39).unwrap();
        assert!(de.max_coeff_diff(&e39) <= 1e-15);

        assert_eq!(jackson_derivative(&z3, ONE), Err(Error::QIsOne));
    }

    #[test]
    fn jackson_on_laurent_terms() {
        let q = c(2.0, 0.0);
        let s = TruncatedSeries::monomial(-2, ONE).unwrap();
        let d = jackson_derivative(&s, q).unwrap();
        // (-2)_q = (1 - q^-2)/(1 - q) = -0.75
        assert!((d.coeff(-3) - c(-0.75, 0.0)).norm() < 1e-15);
        let x = c(0.6, 0.2);
        let dq = jackson_difference_quotient(&s, q, x).unwrap();
        assert!((dq - d.evaluate(x).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn psi_derivative_examples() {
        let ps = PsiSequence::q(c(0.5, 0.0), 20).unwrap();
        let z = TruncatedSeries::monomial(1, ONE).unwrap();
        assert_eq!(
            psi_derivative(&z, &ps).unwrap().coeffs(),
            &[ps.number(1).unwrap()]
        );

        let poly = TruncatedSeries::new(
            0,
            (0..12)
                .map(|k| c(k as f64 * 0.3 - 1.0, 0.1 * k as f64))
                .collect(),
        )
        .unwrap();
        let a = psi_derivative(&poly, &ps).unwrap();
        let b = jackson_derivative(&poly, c(0.5, 0.0)).unwrap();
        assert_eq!(a.coeffs(), b.coeffs());

        let e = series_exp_psi(&ps, 20).unwrap();
        let de = psi_derivative(&e, &ps).unwrap();
        assert!(de.max_coeff_diff(&series_exp_psi(&ps, 19).unwrap()) <= 1e-15);

        let laurent = TruncatedSeries::monomial(-1, ONE).unwrap();
        assert_eq!(
            psi_derivative(&laurent, &ps),
            Err(Error::NegativeDegree(-1))
        );
        assert!(psi_derivative(&TruncatedSeries::exp(30), &ps).is_err());
    }

    #[test]
    fn exp_psi_examples() {
        let near = PsiSequence::q(c(1.0 + 1e-8, 0.0), 64).unwrap();
        let e = series_exp_psi(&near, 64).unwrap();
        let classical = TruncatedSeries::exp(64);
        assert!(e.max_coeff_diff(&classical) <= 1e-6);
        assert_eq!(e.evaluate(ZERO).unwrap(), ONE);

        let ones = PsiSequence::explicit(vec![ONE; 10]).unwrap();
        let g = series_exp_psi(&ones, 10).unwrap();
        assert_eq!(g.coeffs(), TruncatedSeries::geometric(10).coeffs());
        assert_eq!(g.domain().max_abs_arg, 0.9);

        let half = PsiSequence::q(c(0.5, 0.0), 4).unwrap();
        let e = series_exp_psi(&half, 4).unwrap();
        assert!((e.coeff(2) - c(2.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn psi_hyperbolic_examples() {
        let ctx = CyclicContext::new(2).unwrap();
        let one = AlphaRoot::new(ONE, 2, 0).unwrap();
        let half = PsiSequence::q(c(0.5, 0.0), 48).unwrap();
        let fam = build_psi_hyperbolic(&half, &ctx, &one, 48).unwrap();
        let comp = fam.component(0);
        assert_eq!(comp.coeff(0), ONE);
        assert_eq!(comp.coeff(1), ZERO);
        assert!((comp.coeff(2) - half.inv_factorial(2).unwrap()).norm() < 1e-16);

        let ctx3 = CyclicContext::new(3).unwrap();
        let near = PsiSequence::q(c(1.0 + 1e-8, 0.0), 64).unwrap();
        for &alpha in &[ONE, c(-1.0, 0.0), c(2.0, 0.0)] {
            let a = AlphaRoot::new(alpha, 3, 0).unwrap();
            let qf = build_psi_hyperbolic(&near, &ctx3, &a, 64).unwrap();
            let cf = HyperbolicFamily::build(3, &a, 64).unwrap();
            for s in 0..3 {
                assert!(qf.component(s).max_coeff_diff(cf.component(s)) <= 1e-6);
            }
        }

        let zero = AlphaRoot::new(ZERO, 3, 0).unwrap();
        let fam = build_psi_hyperbolic(&half, &ctx3, &zero, 12).unwrap();
        let x = c(0.8, 0.1);
        for s in 0..3 {
            let want = x.powu(s as u32) * half.inv_factorial(s).unwrap();
            assert!((fam.eval(s, x, EvalMethod::Series).unwrap() - want).norm() < 1e-15);
        }
    }

    #[test]
    fn psi_family_closed_and_series_agree() {
        let ctx = CyclicContext::new(3).unwrap();
        let a = AlphaRoot::new(c(2.0, 0.0), 3, 1).unwrap();
        let ps = PsiSequence::q(c(2.0, 0.0), 64).unwrap();
        let fam = build_psi_hyperbolic(&ps, &ctx, &a, 64).unwrap();
        let z = c(0.5, -0.4);
        for s in 0..3 {
            let x = fam.eval(s, z, EvalMethod::Series).unwrap();
            let y = fam.eval(s, z, EvalMethod::Closed).unwrap();
            assert!((x - y).norm() <= 1e-12);
        }
    }

    #[test]
    fn laguerre_examples() {
        let q = c(0.5, 0.0);
        let l1 = q_laguerre(1, q).unwrap();
        assert_eq!(l1.coeffs(), &[ZERO, c(-1.0, 0.0)]);
        assert_eq!(q_laguerre(0, q).unwrap(), Polynomial::one());
        for n in 1..=5 {
            let p = q_laguerre(n, q).unwrap();
            assert_eq!(p.eval(ZERO), ZERO);
            assert_eq!(p.degree(), n);
        }
        // frozen by exact rational computation at q = 1/2
        let l3 = q_laguerre(3, q).unwrap();
        let want = [0.0, -21.0 / 8.0, 7.0 / 2.0, -1.0];
        for (k, w) in want.iter().enumerate() {
            assert!((l3.coeff(k) - c(*w, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn lowering_examples() {
        let q = c(0.5, 0.0);
        let x = Polynomial::monomial(1);
        assert_eq!(
            lowering_operator_apply(&x, q, 1).unwrap(),
            Polynomial::new(vec![-ONE])
        );
        assert!(lowering_operator_apply(&Polynomial::one(), q, 0)
            .unwrap()
            .is_zero());
        assert!(matches!(
            lowering_operator_apply(&Polynomial::monomial(3), q, 2),
            Err(Error::OperatorTruncation { k: 2, deg: 3 })
        ));
        for n in 1..=5 {
            let lhs = lowering_operator_apply(&q_laguerre(n, q).unwrap(), q, n).unwrap();
            let rhs = q_laguerre(n - 1, q).unwrap().scale(q_number(q, n as i64));
            assert!(lhs.max_coeff_diff(&rhs) <= 1e-10);
        }
    }

    #[test]
    fn translation_examples() {
        let classical = PsiSequence::classical(10);
        let y = c(0.7, -0.2);
        let shifted = generalized_translation(&Polynomial::monomial(4), y, &classical).unwrap();
        let x = c(0.3, 0.4);
        assert!((shifted.eval(x) - (x + y).powu(4)).norm() < 1e-13);

        let q = c(0.5, 0.0);
        let ps = PsiSequence::q(q, 4).unwrap();
        let t = generalized_translation(&Polynomial::monomial(2), y, &ps).unwrap();
        let want = Polynomial::new(vec![y * y, q_number(q, 2) * y, ONE]);
        assert!(t.max_coeff_diff(&want) < 1e-15);

        let p = q_laguerre(3, q).unwrap();
        assert_eq!(generalized_translation(&p, ZERO, &ps).unwrap(), p);
    }

    #[test]
    fn psi_binomial_examples() {
        let q = c(0.5, 0.0);
        let ps = PsiSequence::q(q, 8).unwrap();
        let monomials: Vec<Polynomial> = (0..=4).map(Polynomial::monomial).collect();
        let r = verify_psi_binomial(&monomials, &ps, c(0.3, 0.0), c(0.5, 0.0)).unwrap();
        assert!(r.residual <= 1e-11, "{}", r.residual);
        let r = verify_psi_binomial(&monomials, &ps, c(0.3, 0.0), ZERO).unwrap();
        assert_eq!(r.residual, 0.0);

        let laguerre: Vec<Polynomial> = (0..=4).map(|n| q_laguerre(n, q).unwrap()).collect();
        let r = verify_psi_binomial(&laguerre, &ps, c(0.4, 0.1), c(-0.3, 0.6)).unwrap();
        assert!(r.pass, "{}", r.residual);
    }

    #[test]
    fn generating_function_examples() {
        let q = c(0.5, 0.0);
        let ps = PsiSequence::q(q, 48).unwrap();
        let ctx3 = CyclicContext::new(3).unwrap();
        let one = AlphaRoot::new(ONE, 3, 0).unwrap();
        let r =
            verify_generating_function(&ps, &ctx3, &one, 1, c(0.6, 0.0), c(0.8, 0.0), 48).unwrap();
        assert!(r.pass, "{}", r.residual);

        let r = verify_generating_function(&ps, &ctx3, &one, 0, ZERO, c(0.9, 0.3), 48).unwrap();
        assert!(r.residual <= 1e-15);

        let zero = AlphaRoot::new(ZERO, 3, 0).unwrap();
        let r =
            verify_generating_function(&ps, &ctx3, &zero, 2, c(0.6, 0.2), c(0.7, 0.0), 48).unwrap();
        assert!(r.residual <= 1e-15);
    }

    #[test]
    fn polynomial_json_shape() {
        let p = Polynomial::new(vec![ONE, c(0.0, 2.0)]);
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"{"coeffs":[[1.0,0.0],[0.0,2.0]]}"#
        );
        let spec: PsiSpec = serde_json::from_str(r#"{"kind":"q","q":[0.5,0.0]}"#).unwrap();
        assert_eq!(spec, PsiSpec::Q { q: c(0.5, 0.0) });
        let spec: PsiSpec =
            serde_json::from_str(r#"{"kind":"explicit","weights":[[1,0],[2,0]]}"#).unwrap();
        let ps = PsiSequence::from_spec(spec, 0).unwrap();
        assert_eq!(ps.cap(), 2);
        assert_eq!(ps.factorial(2).unwrap(), c(2.0, 0.0));
    }
}
