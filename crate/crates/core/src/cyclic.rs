//! `Z_n` arithmetic, roots of unity and the α-projection operators.
//!
//! `Π_k^α` has two realizations here: a coefficient sieve on series
//! ([`project_series`]) and a finite ω-sum on any pointwise evaluator
//! ([`project_pointwise`]). The sieve is the only one defined at `α = 0`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{pow_i64, EvalDomain, TruncatedSeries};

#[derive(Debug, Clone, PartialEq)]
pub struct CyclicContext {
    n: usize,
    omega_pow: Vec<Complex64>,
}

impl CyclicContext {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Order(n));
        }
        // each power from its own angle rather than repeated products
        let omega_pow = (0..n)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
            .collect();
        Ok(Self { n, omega_pow })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn omega(&self) -> Complex64 {
        self.omega_pow[1]
    }

    /// `ω^k` for any integer exponent.
    pub fn omega_pow(&self, k: i64) -> Complex64 {
        self.omega_pow[self.reduce(k)]
    }

    /// Representative of `k` in `{0, …, n-1}`.
    pub fn reduce(&self, k: i64) -> usize {
        k.rem_euclid(self.n as i64) as usize
    }

    /// `k ∔ l`
    pub fn add(&self, k: usize, l: usize) -> usize {
        (k + l) % self.n
    }

    /// `k ∸ l`
    pub fn sub(&self, k: usize, l: usize) -> usize {
        (k + self.n - l % self.n) % self.n
    }
}

/// α together with one fixed n-th root `r`, `r^n = α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaRoot {
    alpha: Complex64,
    root: Complex64,
    n: usize,
    branch: usize,
}

impl AlphaRoot {
    /// Principal n-th root (argument in `(-π/n, π/n]`) times `ω^branch`.
    pub fn new(alpha: Complex64, n: usize, branch: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Order(n));
        }
        if !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(Error::Invalid("alpha must be finite".into()));
        }
        let branch = branch % n;
        let root = if alpha == Complex64::new(0.0, 0.0) {
            alpha
        } else {
            let (modulus, arg) = alpha.to_polar();
            let principal = Complex64::from_polar(modulus.powf(1.0 / n as f64), arg / n as f64);
            principal * Complex64::from_polar(1.0, 2.0 * PI * branch as f64 / n as f64)
        };
        Ok(Self {
            alpha,
            root,
            n,
            branch,
        })
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn root(&self) -> Complex64 {
        self.root
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn branch(&self) -> usize {
        self.branch
    }

    pub fn is_zero(&self) -> bool {
        self.alpha == Complex64::new(0.0, 0.0)
    }

    /// `α^m`; at `α = 0` only `m = 0` survives.
    pub fn alpha_pow(&self, m: i64) -> Complex64 {
        if self.is_zero() {
            return if m == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
        }
        pow_i64(self.alpha, m)
    }
}

fn check_orders(ctx: &CyclicContext, a: &AlphaRoot) -> Result<()> {
    if ctx.n() != a.n() {
        return Err(Error::Dimension(ctx.n(), a.n()));
    }
    Ok(())
}

/// `Π_k^α` as a coefficient sieve: degree `nm+k` keeps `α^m a_{nm+k}`,
/// every other degree is zeroed. The window of `s` is preserved.
pub fn project_series(
    s: &TruncatedSeries,
    ctx: &CyclicContext,
    k: usize,
    a: &AlphaRoot,
) -> Result<TruncatedSeries> {
    check_orders(ctx, a)?;
    let n = ctx.n() as i64;
    let k = (k % ctx.n()) as i64;
    let coeffs = s
        .degrees()
        .map(|d| {
            if (d - k).rem_euclid(n) == 0 {
                s.coeff(d) * a.alpha_pow((d - k).div_euclid(n))
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    let base = s.domain().max_abs_arg;
    let domain = if a.is_zero() {
        EvalDomain::new(base)
    } else {
        EvalDomain::new(base / a.root().norm())
    };
    Ok(TruncatedSeries::new(s.min_deg(), coeffs)?.with_domain(domain))
}

/// `Π_k^α f` at `z` via `(1/n) r^{-k} Σ_j ω^{-jk} f(ω^j r z)`.
pub fn project_pointwise<F>(
    f: F,
    ctx: &CyclicContext,
    k: usize,
    a: &AlphaRoot,
    z: Complex64,
) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    check_orders(ctx, a)?;
    if a.is_zero() {
        return Err(Error::AlphaZero);
    }
    let r = a.root();
    let k = (k % ctx.n()) as i64;
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..ctx.n() as i64 {
        sum += ctx.omega_pow(-j * k) * f(ctx.omega_pow(j) * r * z)?;
    }
    Ok(sum * pow_i64(r, -k) / ctx.n() as f64)
}

/// `Ω = S(ω)`.
pub fn omega_scale(s: &TruncatedSeries, ctx: &CyclicContext) -> Result<TruncatedSeries> {
    s.scale_argument(ctx.omega())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn context_examples() {
        let two = CyclicContext::new(2).unwrap();
        assert!((two.omega() - c(-1.0, 0.0)).norm() < 1e-15);
        let four = CyclicContext::new(4).unwrap();
        assert!((four.omega() - c(0.0, 1.0)).norm() < 1e-15);
        assert!((four.omega_pow(2) - c(-1.0, 0.0)).norm() < 1e-15);
        let three = CyclicContext::new(3).unwrap();
        assert!((three.omega() - c(-0.5, 3f64.sqrt() / 2.0)).norm() < 1e-15);
        assert_eq!(CyclicContext::new(1), Err(Error::Order(1)));
    }

    #[test]
    fn context_invariants() {
        for n in 2..=12 {
            let ctx = CyclicContext::new(n).unwrap();
            for k in 0..n as i64 {
                assert!((ctx.omega_pow(k).norm() - 1.0).abs() <= 1e-15);
            }
            assert!((ctx.omega().powu(n as u32) - c(1.0, 0.0)).norm() <= 1e-14);
            for m in 0..2 * n as i64 {
                let sum: Complex64 = (0..n as i64).map(|k| ctx.omega_pow(k * m)).sum();
                let want = if m % n as i64 == 0 { n as f64 } else { 0.0 };
                assert!((sum - c(want, 0.0)).norm() <= n as f64 * 1e-13);
            }
        }
    }

    #[test]
    fn mod_arithmetic() {
        let ctx = CyclicContext::new(5).unwrap();
        assert_eq!(ctx.add(3, 4), 2);
        assert_eq!(ctx.sub(1, 3), 3);
        assert_eq!(ctx.sub(0, 5), 0);
        assert_eq!(ctx.reduce(-7), 3);
    }

    #[test]
    fn alpha_root_examples() {
        let r = AlphaRoot::new(c(1.0, 0.0), 3, 0).unwrap();
        assert!((r.root() - c(1.0, 0.0)).norm() < 1e-15);
        let r = AlphaRoot::new(c(-1.0, 0.0), 2, 0).unwrap();
        assert!((r.root() - c(0.0, 1.0)).norm() < 1e-15);
        let r = AlphaRoot::new(c(8.0, 0.0), 3, 1).unwrap();
        let omega = CyclicContext::new(3).unwrap().omega();
        assert!((r.root() - omega * 2.0).norm() < 1e-14);
        let zero = AlphaRoot::new(c(0.0, 0.0), 4, 2).unwrap();
        assert_eq!(zero.root(), c(0.0, 0.0));
    }

    #[test]
    fn alpha_root_power_recovers_alpha() {
        for &alpha in &[
            c(2.0, 0.0),
            c(-3.0, 1.0),
            c(0.0, 1.0),
            c(-1.0, 0.0),
            c(4.0, -4.0),
        ] {
            for n in 2..=8 {
                for b in 0..n {
                    let a = AlphaRoot::new(alpha, n, b).unwrap();
                    let err = (a.root().powu(n as u32) - alpha).norm();
                    assert!(
                        err <= 1e-12 * alpha.norm().max(1.0),
                        "{alpha} {n} {b}: {err}"
                    );
                }
            }
        }
    }

    #[test]
    fn project_series_examples() {
        let ctx2 = CyclicContext::new(2).unwrap();
        let one = AlphaRoot::new(c(1.0, 0.0), 2, 0).unwrap();
        let cosh = project_series(&TruncatedSeries::exp(64), &ctx2, 0, &one).unwrap();
        assert_eq!(cosh.coeff(0), c(1.0, 0.0));
        assert_eq!(cosh.coeff(1), c(0.0, 0.0));
        assert_eq!(cosh.coeff(2), c(0.5, 0.0));
        assert!((cosh.coeff(4) - c(1.0 / 24.0, 0.0)).norm() < 1e-18);

        let ctx3 = CyclicContext::new(3).unwrap();
        let zero = AlphaRoot::new(c(0.0, 0.0), 3, 0).unwrap();
        let h2 = project_series(&TruncatedSeries::exp(64), &ctx3, 2, &zero).unwrap();
        for d in h2.degrees() {
            let want = if d == 2 { c(0.5, 0.0) } else { c(0.0, 0.0) };
            assert_eq!(h2.coeff(d), want);
        }

        let one3 = AlphaRoot::new(c(1.0, 0.0), 3, 0).unwrap();
        let g1 = project_series(&TruncatedSeries::geometric(6), &ctx3, 1, &one3).unwrap();
        let nonzero: Vec<i64> = g1
            .degrees()
            .filter(|&d| g1.coeff(d) != c(0.0, 0.0))
            .collect();
        assert_eq!(nonzero, vec![1, 4]);
    }

    #[test]
    fn project_series_negative_degrees() {
        let ctx = CyclicContext::new(3).unwrap();
        let a = AlphaRoot::new(c(2.0, 0.0), 3, 0).unwrap();
        let s =
            TruncatedSeries::from_terms(&[(-4, c(1.0, 0.0)), (-1, c(1.0, 0.0)), (2, c(1.0, 0.0))])
                .unwrap();
        let p = project_series(&s, &ctx, 2, &a).unwrap();
        // -4 = 3·(-2)+2, -1 = 3·(-1)+2, 2 = 3·0+2
        assert!((p.coeff(-4) - c(0.25, 0.0)).norm() < 1e-15);
        assert!((p.coeff(-1) - c(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(p.coeff(2), c(1.0, 0.0));
    }

    #[test]
    fn project_pointwise_examples() {
        let ctx = CyclicContext::new(2).unwrap();
        let exp = |w: Complex64| Ok(w.exp());
        let one = AlphaRoot::new(c(1.0, 0.0), 2, 0).unwrap();
        let v = project_pointwise(exp, &ctx, 0, &one, c(1.0, 0.0)).unwrap();
        assert!((v - c(1f64.cosh(), 0.0)).norm() <= 1e-12);

        let minus = AlphaRoot::new(c(-1.0, 0.0), 2, 0).unwrap();
        let v = project_pointwise(exp, &ctx, 0, &minus, c(PI / 3.0, 0.0)).unwrap();
        assert!((v - c(0.5, 0.0)).norm() <= 1e-12);

        let f = |w: Complex64| Ok(c(3.0, 1.0) + w * w);
        let v = project_pointwise(f, &ctx, 0, &one, c(0.0, 0.0)).unwrap();
        assert_eq!(v, c(3.0, 1.0));

        let zero = AlphaRoot::new(c(0.0, 0.0), 2, 0).unwrap();
        assert_eq!(
            project_pointwise(exp, &ctx, 0, &zero, c(1.0, 0.0)),
            Err(Error::AlphaZero)
        );
    }

    #[test]
    fn pointwise_propagates_evaluator_failure() {
        let ctx = CyclicContext::new(3).unwrap();
        let one = AlphaRoot::new(c(1.0, 0.0), 3, 0).unwrap();
        let g = TruncatedSeries::geometric(64);
        let err = project_pointwise(|w| g.evaluate(w), &ctx, 0, &one, c(0.95, 0.0));
        assert!(matches!(err, Err(Error::Domain { .. })));
    }

    #[test]
    fn omega_scale_examples() {
        let ctx = CyclicContext::new(3).unwrap();
        let konst = TruncatedSeries::monomial(0, c(2.0, 1.0)).unwrap();
        assert_eq!(omega_scale(&konst, &ctx).unwrap().coeffs(), konst.coeffs());

        let z3 = TruncatedSeries::monomial(3, c(1.0, 0.0)).unwrap();
        assert!((omega_scale(&z3, &ctx).unwrap().coeff(3) - c(1.0, 0.0)).norm() < 1e-14);

        let one = AlphaRoot::new(c(1.0, 0.0), 3, 0).unwrap();
        let h1 = project_series(&TruncatedSeries::exp(64), &ctx, 1, &one).unwrap();
        let scaled = omega_scale(&h1, &ctx).unwrap();
        assert!(scaled.max_coeff_diff(&h1.scale(ctx.omega())) <= 1e-13);
    }

    #[test]
    fn mismatched_orders_are_rejected() {
        let ctx = CyclicContext::new(3).unwrap();
        let a = AlphaRoot::new(c(1.0, 0.0), 4, 0).unwrap();
        assert!(project_series(&TruncatedSeries::exp(8), &ctx, 0, &a).is_err());
    }
}
