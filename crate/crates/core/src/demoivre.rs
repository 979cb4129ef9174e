//! Generator γ(α), the α-de Moivre group `H^α(z) = exp(γ(α) z)`, α-circulants and
//! their determinants.

use num_complex::Complex64;

use crate::cyclic::{AlphaRoot, CyclicContext};
use crate::error::{Error, Result};
use crate::hyperbolic::{EvalMethod, HyperbolicFamily};
use crate::matrix::ComplexMatrix;
use crate::series::{EvalDomain, DEFAULT_TRUNCATION, ENTIRE_DOMAIN};

/// Stop summing the Taylor series once the remainder bound drops below this.
pub const TAYLOR_REMAINDER: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DemoivreMethod {
    /// α-circulant of `(h_0^α(z), …, h_{n-1}^α(z))`.
    Assembled,
    /// Truncated Taylor series of `exp(γ(α) z)`.
    Taylor,
}

/// Ones on the superdiagonal, `α` in the bottom-left corner.
pub fn gamma_matrix(n: usize, alpha: Complex64) -> Result<ComplexMatrix> {
    if n < 2 {
        return Err(Error::Order(n));
    }
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n - 1 {
        m[(i, i + 1)] = Complex64::new(1.0, 0.0);
    }
    m[(n - 1, 0)] = alpha;
    Ok(m)
}

/// `exp(A)` by Taylor summation with the tail bound
/// `‖A‖^{K+1}/(K+1)! · 1/(1 - ‖A‖/(K+2)) < 1e-15`.
pub fn expm_taylor(a: &ComplexMatrix) -> ComplexMatrix {
    let norm = a.inf_norm();
    let mut sum = ComplexMatrix::identity(a.n());
    let mut term = ComplexMatrix::identity(a.n());
    // bound on the next term ‖A‖^{k}/k!
    let mut next_bound = norm;
    let mut k = 1usize;
    loop {
        let ratio = norm / (k as f64 + 1.0);
        if ratio < 1.0 && next_bound / (1.0 - ratio) < TAYLOR_REMAINDER {
            break;
        }
        term = term.mul(a).scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
        k += 1;
        next_bound *= norm / k as f64;
    }
    sum
}

/// `H^α(z)`.
pub fn demoivre_matrix(
    n: usize,
    a: &AlphaRoot,
    z: Complex64,
    method: DemoivreMethod,
) -> Result<ComplexMatrix> {
    if a.n() != n {
        return Err(Error::Dimension(n, a.n()));
    }
    match method {
        DemoivreMethod::Assembled => {
            let fam = HyperbolicFamily::build(n, a, DEFAULT_TRUNCATION)?;
            assembled_matrix(&fam, z)
        }
        DemoivreMethod::Taylor => {
            EvalDomain::new(ENTIRE_DOMAIN).check(z)?;
            let gamma = gamma_matrix(n, a.alpha())?;
            Ok(expm_taylor(&gamma.scale(z)))
        }
    }
}

/// `H^α(z)` assembled from an already built family.
pub fn assembled_matrix(fam: &HyperbolicFamily, z: Complex64) -> Result<ComplexMatrix> {
    let values = fam.values(z, EvalMethod::Series)?;
    circulant_from_components(&values, fam.root().alpha())
}

/// Entry `(i, j)` is component `j ∸ i`, times `α` below the diagonal.
pub fn circulant_from_components(
    components: &[Complex64],
    alpha: Complex64,
) -> Result<ComplexMatrix> {
    let n = components.len();
    if n == 0 {
        return Err(Error::ComponentCount {
            expected: 1,
            got: 0,
        });
    }
    Ok(ComplexMatrix::from_fn(n, |i, j| {
        let value = components[(j + n - i) % n];
        if j < i {
            value * alpha
        } else {
            value
        }
    }))
}

/// Same as [`circulant_from_components`] with the component count checked against `ctx`.
pub fn circulant_for_context(
    components: &[Complex64],
    ctx: &CyclicContext,
    alpha: Complex64,
) -> Result<ComplexMatrix> {
    if components.len() != ctx.n() {
        return Err(Error::ComponentCount {
            expected: ctx.n(),
            got: components.len(),
        });
    }
    circulant_from_components(components, alpha)
}

/// `Σ_k c_k γ(α)^k`; equal to the α-circulant, kept as a second assembly route.
pub fn circulant_from_generator_powers(
    components: &[Complex64],
    alpha: Complex64,
) -> Result<ComplexMatrix> {
    let n = components.len();
    let gamma = gamma_matrix(n, alpha)?;
    let mut power = ComplexMatrix::identity(n);
    let mut sum = ComplexMatrix::zeros(n);
    for &c in components {
        sum = sum.add(&power.scale(c));
        power = power.mul(&gamma);
    }
    Ok(sum)
}

/// `Π_l Σ_k c_k r^k ω^{kl}`: the product of the α-circulant's eigenvalues.
pub fn circulant_det_spectral(
    components: &[Complex64],
    ctx: &CyclicContext,
    a: &AlphaRoot,
) -> Result<Complex64> {
    if components.len() != ctx.n() {
        return Err(Error::ComponentCount {
            expected: ctx.n(),
            got: components.len(),
        });
    }
    let r = a.root();
    let mut det = Complex64::new(1.0, 0.0);
    for l in 0..ctx.n() as i64 {
        let mut eigen = Complex64::new(0.0, 0.0);
        let mut rk = Complex64::new(1.0, 0.0);
        for (k, &c) in components.iter().enumerate() {
            eigen += c * rk * ctx.omega_pow(k as i64 * l);
            rk *= r;
        }
        det *= eigen;
    }
    Ok(det)
}

/// LU determinant; the independent route for circulant determinants.
pub fn circulant_det_direct(m: &ComplexMatrix) -> Complex64 {
    m.det()
}

/// `Π_l L(ω^l r z)` for a pointwise generator `L`.
pub fn det_product_rhs<F>(
    l_fn: F,
    ctx: &CyclicContext,
    a: &AlphaRoot,
    z: Complex64,
) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut prod = Complex64::new(1.0, 0.0);
    for l in 0..ctx.n() as i64 {
        prod *= l_fn(ctx.omega_pow(l) * a.root() * z)?;
    }
    Ok(prod)
}

/// Unitary DFT matrix `(1/√n)(ω^{kl})`.
pub fn sylvester_matrix(ctx: &CyclicContext) -> ComplexMatrix {
    let scale = 1.0 / (ctx.n() as f64).sqrt();
    ComplexMatrix::from_fn(ctx.n(), |k, l| ctx.omega_pow((k * l) as i64) * scale)
}

/// `h_0² − α h_1²` style surface for n = 2 and the cubic
/// `x³ + αy³ + α²z³ − 3αxyz` for n = 3.
pub fn surface_polynomial(values: &[Complex64], alpha: Complex64) -> Option<Complex64> {
    match values {
        [x, y] => Some(x * x - alpha * y * y),
        [x, y, z] => Some(
            x.powu(3) + alpha * y.powu(3) + alpha * alpha * z.powu(3) - alpha * 3.0 * x * y * z,
        ),
        _ => None,
    }
}

/// The quartic surface as printed for n = 4; on the de Moivre curve it evaluates
/// to `-det`, so callers compare against −1.
pub fn printed_quartic(values: &[Complex64; 4]) -> Complex64 {
    let [x, y, z, t] = *values;
    -x.powu(4) + y.powu(4) - z.powu(4) + t.powu(4) + 4.0 * x * x * y * t - 4.0 * x * y * y * z
        + 4.0 * z * z * y * t
        - 4.0 * t * t * x * z
        + 2.0 * x * x * z * z
        - 2.0 * y * y * t * t
}
