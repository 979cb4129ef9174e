//! α-hyperbolic functions of order n and the related geometric/Laurent components.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cyclic::{project_pointwise, project_series, AlphaRoot, CyclicContext};
use crate::error::{Error, Result};
use crate::series::{EvalDomain, SeriesJson, TruncatedSeries, GEOMETRIC_DOMAIN};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMethod {
    /// Horner evaluation of the stored sieved component.
    Series,
    /// Finite ω-sum of the generating function.
    Closed,
}

impl std::str::FromStr for EvalMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "series" => Ok(Self::Series),
            "closed" => Ok(Self::Closed),
            other => Err(Error::Invalid(format!("unknown method {other:?}"))),
        }
    }
}

/// Generating function the family was projected from.
#[derive(Debug, Clone, PartialEq)]
enum Generator {
    /// The library exponential drives the closed form.
    Exp,
    /// Closed form sums the generator series itself (exp_ψ and friends).
    Series(TruncatedSeries),
}

/// `h_0^α … h_{n-1}^α` for a fixed order and root.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicFamily {
    ctx: CyclicContext,
    root: AlphaRoot,
    generator: Generator,
    components: Vec<TruncatedSeries>,
}

/// Wire form: the series of each component plus `n`, `alpha` and `branch`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyJson {
    pub n: usize,
    pub alpha: Complex64,
    pub branch: usize,
    pub components: Vec<SeriesJson>,
}

impl HyperbolicFamily {
    /// Projects `exp` truncated at `trunc` onto every class of `Z_n`.
    pub fn build(n: usize, a: &AlphaRoot, trunc: usize) -> Result<Self> {
        let ctx = CyclicContext::new(n)?;
        Self::from_generator(ctx, a, TruncatedSeries::exp(trunc), true)
    }

    pub(crate) fn from_generator(
        ctx: CyclicContext,
        a: &AlphaRoot,
        base: TruncatedSeries,
        library_exp: bool,
    ) -> Result<Self> {
        let n = ctx.n();
        if base.max_deg() < n as i64 {
            return Err(Error::Truncation {
                trunc: base.max_deg().max(0) as usize,
                n,
            });
        }
        let components = (0..n)
            .map(|s| Ok(project_series(&base, &ctx, s, a)?.with_label(format!("h_{s}"))))
            .collect::<Result<Vec<_>>>()?;
        let generator = if library_exp {
            Generator::Exp
        } else {
            Generator::Series(base)
        };
        Ok(Self {
            ctx,
            root: *a,
            generator,
            components,
        })
    }

    pub fn ctx(&self) -> &CyclicContext {
        &self.ctx
    }

    pub fn root(&self) -> &AlphaRoot {
        &self.root
    }

    pub fn n(&self) -> usize {
        self.ctx.n()
    }

    pub fn component(&self, s: usize) -> &TruncatedSeries {
        &self.components[s % self.n()]
    }

    pub fn components(&self) -> &[TruncatedSeries] {
        &self.components
    }

    pub fn domain(&self) -> EvalDomain {
        self.components[0].domain()
    }

    /// `h_s^α(z)` by either evaluation route.
    pub fn eval(&self, s: usize, z: Complex64, method: EvalMethod) -> Result<Complex64> {
        let s = s % self.n();
        let component = &self.components[s];
        match method {
            EvalMethod::Series => component.evaluate(z),
            EvalMethod::Closed => {
                if self.root.is_zero() {
                    return Err(Error::AlphaZero);
                }
                component.domain().check(z)?;
                match &self.generator {
                    Generator::Exp => {
                        project_pointwise(|w| Ok(w.exp()), &self.ctx, s, &self.root, z)
                    }
                    Generator::Series(base) => project_pointwise(
                        |w| base.evaluate_unchecked(w),
                        &self.ctx,
                        s,
                        &self.root,
                        z,
                    ),
                }
            }
        }
    }

    /// All n components at `z`.
    pub fn values(&self, z: Complex64, method: EvalMethod) -> Result<Vec<Complex64>> {
        (0..self.n()).map(|s| self.eval(s, z, method)).collect()
    }

    pub fn to_json(&self) -> FamilyJson {
        FamilyJson {
            n: self.n(),
            alpha: self.root.alpha(),
            branch: self.root.branch(),
            components: self.components.iter().map(|c| c.to_json()).collect(),
        }
    }
}

/// `h_s^α(z)` shorthand over a freshly built family.
pub fn h_eval(
    fam: &HyperbolicFamily,
    s: usize,
    z: Complex64,
    method: EvalMethod,
) -> Result<Complex64> {
    fam.eval(s, z, method)
}

/// `g_l^α(z)` through the ω-sum of `1/(1-w)`.
pub fn g_eval(ctx: &CyclicContext, a: &AlphaRoot, l: usize, z: Complex64) -> Result<Complex64> {
    if a.is_zero() {
        return Err(Error::AlphaZero);
    }
    EvalDomain::new(GEOMETRIC_DOMAIN).check(a.root() * z)?;
    project_pointwise(|w| Ok((Complex64::new(1.0, 0.0) - w).inv()), ctx, l, a, z)
}

/// `L_l^α` for an arbitrary series; the sieve with a component label attached.
pub fn laurent_component(
    s: &TruncatedSeries,
    ctx: &CyclicContext,
    a: &AlphaRoot,
    l: usize,
) -> Result<TruncatedSeries> {
    Ok(project_series(s, ctx, l, a)?.with_label(format!("L_{}^alpha", l % ctx.n())))
}
