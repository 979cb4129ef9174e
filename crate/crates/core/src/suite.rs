//! Identity checks behind a common trait, registered by name and grouped into
//! suites. Every check turns its residuals into [`IdentityReport`]s; a check that
//! cannot even be computed yields a failing report rather than an error.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cyclic::{omega_scale, project_series, AlphaRoot, CyclicContext};
use crate::demoivre::{
    assembled_matrix, circulant_det_direct, circulant_det_spectral, circulant_from_components,
    circulant_from_generator_powers, det_product_rhs, expm_taylor, gamma_matrix, printed_quartic,
    surface_polynomial, sylvester_matrix,
};
use crate::error::{Error, Result};
use crate::hyperbolic::{laurent_component, EvalMethod, HyperbolicFamily};
use crate::matrix::ComplexMatrix;
use crate::psi::{
    basic_laguerre, build_psi_hyperbolic, generalized_translation, jackson_derivative,
    jackson_difference_quotient, lowering_operator_apply_psi, poly_jackson, psi_derivative,
    series_exp_psi, verify_generating_function, verify_psi_binomial, Polynomial, PsiSequence,
};
use crate::report::{cjson, rel_residual, IdentityReport};
use crate::series::TruncatedSeries;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Demoivre,
    Circulant,
    Qpsi,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Demoivre => "demoivre",
            Suite::Circulant => "circulant",
            Suite::Qpsi => "qpsi",
        }
    }
}

/// `demoivre | circulant | qpsi | all`
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteSelection {
    One(Suite),
    All,
}

impl SuiteSelection {
    fn includes(self, suites: &[Suite]) -> bool {
        match self {
            SuiteSelection::All => true,
            SuiteSelection::One(s) => suites.contains(&s),
        }
    }
}

impl FromStr for SuiteSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "demoivre" => Ok(Self::One(Suite::Demoivre)),
            "circulant" => Ok(Self::One(Suite::Circulant)),
            "qpsi" => Ok(Self::One(Suite::Qpsi)),
            "all" => Ok(Self::All),
            other => Err(Error::Invalid(format!("unknown suite {other:?}"))),
        }
    }
}

impl fmt::Display for SuiteSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuiteSelection::One(s) => f.write_str(s.name()),
            SuiteSelection::All => f.write_str("all"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub n: usize,
    pub alpha: Complex64,
    pub branch: usize,
    pub q: Complex64,
    pub trunc: usize,
    pub seed: u64,
    /// Number of random `(z, w)` pairs; residuals are maximized over them.
    pub samples: usize,
    /// Replaces every upper-bound tolerance when set.
    pub tolerance: Option<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            n: 3,
            alpha: ONE,
            branch: 0,
            q: Complex64::new(0.5, 0.0),
            trunc: crate::series::DEFAULT_TRUNCATION,
            seed: 7,
            samples: 1,
            tolerance: None,
        }
    }
}

/// `samples` points drawn uniformly from the unit disk.
pub fn unit_disk_points(seed: u64, samples: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let radius = rng.gen::<f64>().sqrt();
            let angle = rng.gen::<f64>() * std::f64::consts::TAU;
            Complex64::from_polar(radius, angle)
        })
        .collect()
}

/// Everything a check needs, built once per run.
pub struct CheckInput {
    pub cfg: SuiteConfig,
    pub ctx: CyclicContext,
    pub root: AlphaRoot,
    pub family: HyperbolicFamily,
    pub points: Vec<(Complex64, Complex64)>,
}

impl CheckInput {
    pub fn new(cfg: SuiteConfig) -> Result<Self> {
        let pts = unit_disk_points(cfg.seed, 2 * cfg.samples.max(1));
        let points = pts.chunks(2).map(|p| (p[0], p[1])).collect();
        Self::with_points(cfg, points)
    }

    pub fn with_points(cfg: SuiteConfig, points: Vec<(Complex64, Complex64)>) -> Result<Self> {
        if cfg.trunc < cfg.n {
            return Err(Error::Truncation {
                trunc: cfg.trunc,
                n: cfg.n,
            });
        }
        let ctx = CyclicContext::new(cfg.n)?;
        let root = AlphaRoot::new(cfg.alpha, cfg.n, cfg.branch)?;
        let family = HyperbolicFamily::build(cfg.n, &root, cfg.trunc)?;
        Ok(Self {
            cfg,
            ctx,
            root,
            family,
            points,
        })
    }

    fn n(&self) -> usize {
        self.ctx.n()
    }

    fn alpha(&self) -> Complex64 {
        self.root.alpha()
    }

    fn is_classical(&self) -> bool {
        self.alpha() == ONE
    }

    fn base_params(&self) -> Value {
        json!({
            "n": self.n(),
            "alpha": cjson(self.alpha()),
            "branch": self.root.branch(),
            "samples": self.points.len(),
        })
    }

    fn params_with(&self, extra: Value) -> Value {
        let mut base = self.base_params();
        if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
            b.extend(e);
        }
        base
    }

    fn domain(&self) -> f64 {
        self.family.domain().max_abs_arg
    }

    fn h(&self, z: Complex64) -> Result<Vec<Complex64>> {
        self.family.values(z, EvalMethod::Series)
    }

    fn h_matrix(&self, z: Complex64) -> Result<ComplexMatrix> {
        assembled_matrix(&self.family, z)
    }
}

/// Pulls `z` toward the origin so that `|z| ≤ limit`.
fn fit(z: Complex64, limit: f64) -> Complex64 {
    let abs = z.norm();
    if abs > limit && abs > 0.0 {
        z * (limit / abs)
    } else {
        z
    }
}

/// Chebyshev residual scaled by the reference magnitude.
fn matrix_residual(a: &ComplexMatrix, reference: &ComplexMatrix) -> f64 {
    a.max_abs_diff(reference) / reference.max_abs().max(1.0)
}

/// Coefficient residual over degrees `lo..=hi`, scaled by the reference's largest coefficient.
fn window_residual(a: &TruncatedSeries, b: &TruncatedSeries, lo: i64, hi: i64) -> f64 {
    let scale = b.max_abs_coeff().max(1.0);
    (lo..=hi)
        .map(|d| (a.coeff(d) - b.coeff(d)).norm())
        .fold(0.0, f64::max)
        / scale
}

/// One named numerical identity.
pub trait IdentityCheck: Send + Sync {
    fn name(&self) -> &'static str;
    fn suites(&self) -> &'static [Suite];
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>>;
}

/// Ordered collection of checks; report order follows registration order.
#[derive(Clone, Default)]
pub struct CheckRegistry {
    checks: Vec<Arc<dyn IdentityCheck>>,
}

impl CheckRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every check shipped with the crate.
    pub fn builtin() -> Self {
        let mut r = Self::new();
        // projection algebra and the α-hyperbolic family
        r.register(Arc::new(EulerFormula));
        r.register(Arc::new(ProjectionOrthogonality));
        r.register(Arc::new(WeightedResolution));
        r.register(Arc::new(BranchIndependence));
        r.register(Arc::new(SeriesClosedAgreement));
        r.register(Arc::new(OmegaEigenrelation));
        r.register(Arc::new(RootExpansion));
        r.register(Arc::new(DerivativeRelation));
        // de Moivre group
        r.register(Arc::new(GroupLaw));
        r.register(Arc::new(DemoivrePower));
        r.register(Arc::new(UnitDeterminant));
        r.register(Arc::new(TaylorAgreement));
        r.register(Arc::new(GeneratorOde));
        r.register(Arc::new(Surface));
        r.register(Arc::new(ProductFormula));
        r.register(Arc::new(AdditionFormula));
        r.register(Arc::new(TripleArgument));
        r.register(Arc::new(DetProduct));
        // circulants
        r.register(Arc::new(SpectralVsDirect));
        r.register(Arc::new(GeometricDeterminant));
        r.register(Arc::new(NonExpGroupLaw));
        r.register(Arc::new(GammaGenerator));
        r.register(Arc::new(Sylvester));
        r.register(Arc::new(GeneratorPowerSum));
        // q / ψ layer
        r.register(Arc::new(QLeibniz));
        r.register(Arc::new(JacksonRoutes));
        r.register(Arc::new(DerivativeLadder));
        r.register(Arc::new(PsiFamily));
        r.register(Arc::new(LaguerreBasic));
        r.register(Arc::new(QOneContinuity));
        r.register(Arc::new(PsiBinomial));
        r.register(Arc::new(GeneratingFunction));
        r
    }

    /// Adds a check; a check with the same name is replaced in place.
    pub fn register(&mut self, check: Arc<dyn IdentityCheck>) {
        match self.checks.iter().position(|c| c.name() == check.name()) {
            Some(i) => self.checks[i] = check,
            None => self.checks.push(check),
        }
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn IdentityCheck>> {
        self.checks.iter().find(|c| c.name() == name).cloned()
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.checks.iter().map(|c| c.name()).collect()
    }

    pub fn selected(&self, selection: SuiteSelection) -> Vec<Arc<dyn IdentityCheck>> {
        self.checks
            .iter()
            .filter(|c| selection.includes(c.suites()))
            .cloned()
            .collect()
    }

    pub fn run(&self, selection: SuiteSelection, input: &CheckInput) -> Vec<IdentityReport> {
        let mut reports = Vec::new();
        for check in self.selected(selection) {
            match check.run(input) {
                Ok(rs) => reports.extend(rs),
                Err(e) => reports.push(IdentityReport::failed(
                    check.name(),
                    input.base_params(),
                    0.0,
                    e.to_string(),
                )),
            }
        }
        if let Some(tol) = input.cfg.tolerance {
            for r in &mut reports {
                r.override_tolerance(tol);
            }
        }
        reports
    }
}

/// Runs the de Moivre suite at a single pair of arguments.
pub fn verify_identity_suite(
    n: usize,
    a: &AlphaRoot,
    z: Complex64,
    w: Complex64,
) -> Result<Vec<IdentityReport>> {
    let cfg = SuiteConfig {
        n,
        alpha: a.alpha(),
        branch: a.branch(),
        ..SuiteConfig::default()
    };
    let input = CheckInput::with_points(cfg, vec![(z, w)])?;
    Ok(CheckRegistry::builtin().run(SuiteSelection::One(Suite::Demoivre), &input))
}

/// Group-law and determinant-product residuals of the α-circulant built from `l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupLawProbe {
    pub group_law: f64,
    pub det_product: f64,
}

pub fn group_law_probe(
    l: &TruncatedSeries,
    ctx: &CyclicContext,
    a: &AlphaRoot,
    z: Complex64,
    w: Complex64,
) -> Result<GroupLawProbe> {
    let comps = (0..ctx.n())
        .map(|k| laurent_component(l, ctx, a, k))
        .collect::<Result<Vec<_>>>()?;
    let circ = |x: Complex64| -> Result<ComplexMatrix> {
        let vals = comps
            .iter()
            .map(|c| c.evaluate(x))
            .collect::<Result<Vec<_>>>()?;
        circulant_from_components(&vals, a.alpha())
    };
    let cz = circ(z)?;
    let cw = circ(w)?;
    let czw = circ(z + w)?;
    let group_law = matrix_residual(&cz.mul(&cw), &czw);
    let det = circulant_det_direct(&cz);
    let rhs = det_product_rhs(|x| l.evaluate(x), ctx, a, z)?;
    Ok(GroupLawProbe {
        group_law,
        det_product: rel_residual(det, rhs),
    })
}

/// The group law must fail for a non-exponential `l` while the determinant product survives.
pub fn negative_check_non_exp(
    l: &TruncatedSeries,
    ctx: &CyclicContext,
    a: &AlphaRoot,
    z: Complex64,
    w: Complex64,
) -> Result<Vec<IdentityReport>> {
    let probe = group_law_probe(l, ctx, a, z, w)?;
    let label = l.label().unwrap_or("series");
    let params = json!({
        "series": label, "n": ctx.n(), "alpha": cjson(a.alpha()),
        "z": cjson(z), "w": cjson(w),
    });
    Ok(vec![
        IdentityReport::lower(
            "non_exp_group_law_breaks",
            params.clone(),
            probe.group_law,
            1e-3,
        ),
        IdentityReport::upper("non_exp_det_product", params, probe.det_product, 1e-9),
    ])
}

macro_rules! check {
    ($ty:ident, $name:literal, [$($suite:ident),+]) => {
        pub struct $ty;
        impl $ty {
            const NAME: &'static str = $name;
            const SUITES: &'static [Suite] = &[$(Suite::$suite),+];
        }
    };
}

macro_rules! impl_meta {
    () => {
        fn name(&self) -> &'static str {
            Self::NAME
        }
        fn suites(&self) -> &'static [Suite] {
            Self::SUITES
        }
    };
}

check!(EulerFormula, "euler_formula", [Demoivre]);
impl IdentityCheck for EulerFormula {
    impl_meta!();

    /// `Σ_l r^l h_l^α(z) = exp(rz)`; at α = 1 the plain sum of components.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let r = input.root.root();
        let mut pointwise = 0.0f64;
        for &(z, _) in &input.points {
            let z = fit(z, 2.0);
            let sum: Complex64 = input
                .h(z)?
                .iter()
                .enumerate()
                .map(|(l, v)| v * crate::series::pow_i64(r, l as i64))
                .sum();
            pointwise = pointwise.max(rel_residual(sum, (r * z).exp()));
        }
        let mut reports = vec![IdentityReport::upper(
            Self::NAME,
            input.base_params(),
            pointwise,
            1e-11,
        )];
        // Σ_k Π_k = id is a partition of the coefficients
        let one = AlphaRoot::new(ONE, input.n(), 0)?;
        let base = TruncatedSeries::exp(input.cfg.trunc);
        let mut total = TruncatedSeries::monomial(0, ZERO)?;
        for k in 0..input.n() {
            total = total.add(&project_series(&base, &input.ctx, k, &one)?);
        }
        reports.push(IdentityReport::upper(
            "resolution_of_identity",
            json!({"n": input.n()}),
            total.max_coeff_diff(&base),
            0.0,
        ));
        Ok(reports)
    }
}

check!(
    ProjectionOrthogonality,
    "projection_orthogonality",
    [Demoivre]
);
impl IdentityCheck for ProjectionOrthogonality {
    impl_meta!();

    /// `Π_l^α Π_m^α = δ_lm α^{-m/n} S(r) Π_l^α`, coefficientwise.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let s = TruncatedSeries::exp(input.cfg.trunc);
        let (ctx, a) = (&input.ctx, &input.root);
        let mut residual = 0.0f64;
        for l in 0..input.n() {
            let pl = project_series(&s, ctx, l, a)?;
            for m in 0..input.n() {
                let twice = project_series(&pl, ctx, m, a)?;
                let want = if l != m {
                    pl.scale(ZERO)
                } else if a.is_zero() {
                    // Π^0 keeps only the m = 0 term, so applying it again changes nothing
                    pl.clone()
                } else {
                    pl.scale_argument(a.root())?
                        .scale(crate::series::pow_i64(a.root(), -(m as i64)))
                };
                residual = residual.max(twice.max_coeff_diff(&want));
            }
        }
        Ok(vec![IdentityReport::upper(
            Self::NAME,
            input.base_params(),
            residual,
            1e-12,
        )])
    }
}

check!(WeightedResolution, "weighted_resolution", [Demoivre]);
impl IdentityCheck for WeightedResolution {
    impl_meta!();

    /// `Σ_k r^k Π_k^α s = S(r) s`.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let s = TruncatedSeries::exp(input.cfg.trunc);
        let r = input.root.root();
        let mut total = TruncatedSeries::monomial(0, ZERO)?;
        for k in 0..input.n() {
            let p = project_series(&s, &input.ctx, k, &input.root)?;
            total = total.add(&p.scale(crate::series::pow_i64(r, k as i64)));
        }
        let want = s.scale_argument(r)?;
        Ok(vec![IdentityReport::upper(
            Self::NAME,
            input.base_params(),
            total.max_coeff_diff(&want),
            1e-12,
        )])
    }
}

check!(BranchIndependence, "branch_independence", [Demoivre]);
impl IdentityCheck for BranchIndependence {
    impl_meta!();

    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        if input.root.is_zero() {
            return Ok(vec![]);
        }
        let mut residual = 0.0f64;
        let n = input.n();
        let reference = &input.family;
        for b in 0..n {
            let a = AlphaRoot::new(input.alpha(), n, b)?;
            let fam = HyperbolicFamily::build(n, &a, input.cfg.trunc)?;
            for &(z, _) in &input.points {
                let z = fit(z, input.domain().min(fam.domain().max_abs_arg));
                for s in 0..n {
                    let x = fam.eval(s, z, EvalMethod::Closed)?;
                    let y = reference.eval(s, z, EvalMethod::Closed)?;
                    residual = residual.max(rel_residual(x, y));
                }
            }
        }
        Ok(vec![IdentityReport::upper(
            Self::NAME,
            input.base_params(),
            residual,
            1e-11,
        )])
    }
}

check!(SeriesClosedAgreement, "series_closed_agreement", [Demoivre]);
impl IdentityCheck for SeriesClosedAgreement {
    impl_meta!();

    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        if input.root.is_zero() {
            return Ok(vec![]);
        }
        let mut residual = 0.0f64;
        for &(z, _) in &input.points {
            for s in 0..input.n() {
                let x = input.family.eval(s, z, EvalMethod::Series)?;
                let y = input.family.eval(s, z, EvalMethod::Closed)?;
                residual = residual.max(rel_residual(x, y));
            }
        }
        Ok(vec![IdentityReport::upper(
            Self::NAME,
            input.base_params(),
            residual,
            1e-11,
        )])
    }
}

check!(OmegaEigenrelation, "omega_eigenrelation", [Demoivre]);
impl IdentityCheck for OmegaEigenrelation {
    impl_meta!();

    /// `Ω h_s^α = ω^s h_s^α`, and the same for the components of a Laurent series.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let laurent = TruncatedSeries::from_terms(
            &(-5..=9)
                .map(|d| {
                    (
                        d,
                        Complex64::new(1.0 / (1.0 + d as f64 * d as f64), 0.1 * d as f64),
                    )
                })
                .collect::<Vec<_>>(),
        )?;
        let mut residual = 0.0f64;
        for s in 0..input.n() {
            let h = input.family.component(s);
            let scaled = omega_scale(h, &input.ctx)?;
            let want = h.scale(input.ctx.omega_pow(s as i64));
            residual = residual.max(scaled.max_coeff_diff(&want) / h.max_abs_coeff().max(1.0));
            let comp = laurent_component(&laurent, &input.ctx, &input.root, s)?;
            let scaled = omega_scale(&comp, &input.ctx)?;
            let want = comp.scale(input.ctx.omega_pow(s as i64));
            residual = residual.max(scaled.max_coeff_diff(&want) / comp.max_abs_coeff().max(1.0));
        }
        Ok(vec![IdentityReport::upper(
            Self::NAME,
            input.base_params(),
            residual,
            1e-13,
        )])
    }
}

check!(RootExpansion, "root_expansion", [Demoivre]);
impl IdentityCheck for RootExpansion {
    impl_meta!();

    /// `L(ω^l r z) = Σ_k r^k ω^{kl} L_k^α(z)` for exp and the geometric series.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let (ctx, a) = (&input.ctx, &input.root);
        let r = a.root();
        let geometric = TruncatedSeries::geometric(input.cfg.trunc.max(128));
        let geo_comps = (0..input.n())
            .map(|k| laurent_component(&geometric, ctx, a, k))
            .collect::<Result<Vec<_>>>()?;
        let mut exp_res = 0.0f64;
        let mut geo_res = 0.0f64;
        for &(z, _) in &input.points {
            let ze = fit(z, 2.0);
            let h = input.h(ze)?;
            let zg = fit(z, geometric_limit(input));
            let g = geo_comps
                .iter()
                .map(|c| c.evaluate(zg))
                .collect::<Result<Vec<_>>>()?;
            for l in 0..input.n() as i64 {
                let weight =
                    |k: usize| crate::series::pow_i64(r, k as i64) * ctx.omega_pow(k as i64 * l);
                let se: Complex64 = h.iter().enumerate().map(|(k, v)| weight(k) * v).sum();
                exp_res = exp_res.max(rel_residual(se, (ctx.omega_pow(l) * r * ze).exp()));
                let sg: Complex64 = g.iter().enumerate().map(|(k, v)| weight(k) * v).sum();
                let want = (ONE - ctx.omega_pow(l) * r * zg).inv();
                geo_res = geo_res.max(rel_residual(sg, want));
            }
        }
        Ok(vec![
            IdentityReport::upper("exp_root_expansion", input.base_params(), exp_res, 1e-11),
            IdentityReport::upper(
                "geometric_root_expansion",
                input.base_params(),
                geo_res,
                1e-10,
            ),
        ])
    }
}

check!(DerivativeRelation, "derivative_relation", [Demoivre]);
impl IdentityCheck for DerivativeRelation {
    impl_meta!();

    /// `d/dz h_s^α = (1 + (α-1)δ_{0,s}) h_{s∸1}^α` and `dⁿ/dzⁿ h_s^α = α h_s^α`.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let n = input.n();
        let top = input.cfg.trunc as i64;
        let mut first = 0.0f64;
        let mut nth = 0.0f64;
        for s in 0..n {
            let comp = input.family.component(s);
            let factor = if s == 0 { input.alpha() } else { ONE };
            let prev = input.family.component(input.ctx.sub(s, 1)).scale(factor);
            first = first.max(window_residual(&comp.derivative(), &prev, 0, top - 1));
            let mut d = comp.clone();
            for _ in 0..n {
                d = d.derivative();
            }
            nth = nth.max(window_residual(
                &d,
                &comp.scale(input.alpha()),
                0,
                top - n as i64,
            ));
        }
        Ok(vec![
            IdentityReport::upper(Self::NAME, input.base_params(), first, 1e-12),
            IdentityReport::upper("nth_derivative", input.base_params(), nth, 1e-12),
        ])
    }
}

check!(GroupLaw, "group_law", [Demoivre]);
impl IdentityCheck for GroupLaw {
    impl_meta!();

    /// `H^α(z) H^α(w) = H^α(z+w)`.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let limit = input.domain() / 2.0;
        let mut residual = 0.0f64;
        for &(z, w) in &input.points {
            let (z, w) = (fit(z, limit), fit(w, limit));
            let lhs = input.h_matrix(z)?.mul(&input.h_matrix(w)?);
            residual = residual.max(matrix_residual(&lhs, &input.h_matrix(z + w)?));
        }
        Ok(vec![IdentityReport::upper(
            Self::NAME,
            input.base_params(),
            residual,
            1e-10,
        )])
    }
}

check!(DemoivrePower, "de_moivre_power", [Demoivre]);
impl IdentityCheck for DemoivrePower {
    impl_meta!();

    /// `H^α(mφ) = H^α(φ)^m` for m = 2, 3, 4.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let mut reports = Vec::new();
        for m in 2..=4u32 {
            let mut residual = 0.0f64;
            for &(phi, _) in &input.points {
                let phi = fit(phi, 0.99 * input.domain() / m as f64);
                let lhs = input.h_matrix(phi * m as f64)?;
                let rhs = input.h_matrix(phi)?.pow(m);
                residual = residual.max(matrix_residual(&rhs, &lhs));
            }
            reports.push(IdentityReport::upper(
                Self::NAME,
                input.params_with(json!({"m": m})),
                residual,
                1e-10,
            ));
        }
        Ok(reports)
    }
}

check!(UnitDeterminant, "unit_determinant", [Demoivre]);
impl IdentityCheck for UnitDeterminant {
    impl_meta!();

    /// `det H^α(z) = 1`; for n = 4, α = 1 the printed quartic surface is logged too.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let mut residual = 0.0f64;
        let mut quartic = 0.0f64;
        for &(z, _) in &input.points {
            let z = fit(z, input.domain());
            residual = residual.max(rel_residual(input.h_matrix(z)?.det(), ONE));
            if input.n() == 4 && input.is_classical() {
                let v = input.h(z)?;
                let value = printed_quartic(&[v[0], v[1], v[2], v[3]]);
                quartic = quartic.max((value - ONE).norm());
            }
        }
        let params = if input.n() == 4 && input.is_classical() {
            input.params_with(json!({"printed_quartic_minus_one": quartic}))
        } else {
            input.base_params()
        };
        Ok(vec![IdentityReport::upper(
            Self::NAME,
            params,
            residual,
            1e-10,
        )])
    }
}

check!(TaylorAgreement, "taylor_agreement", [Demoivre]);
impl IdentityCheck for TaylorAgreement {
    impl_meta!();

    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let gamma = gamma_matrix(input.n(), input.alpha())?;
        let mut residual = 0.0f64;
        for &(z, _) in &input.points {
            let z = fit(z, input.domain().min(4.0));
            let taylor = expm_taylor(&gamma.scale(z));
            residual = residual.max(input.h_matrix(z)?.max_abs_diff(&taylor));
        }
        Ok(vec![IdentityReport::upper(
            Self::NAME,
            input.base_params(),
            residual,
            1e-11,
        )])
    }
}

check!(GeneratorOde, "generator_ode", [Demoivre]);
impl IdentityCheck for GeneratorOde {
    impl_meta!();

    /// Central difference of `H^α` against `γ(α) H^α`.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let h = 1e-5;
        let gamma = gamma_matrix(input.n(), input.alpha())?;
        let mut residual = 0.0f64;
        for &(z, _) in &input.points {
            let z = fit(z, input.domain() - 2.0 * h);
            let fwd = input.h_matrix(z + h)?;
            let bwd = input.h_matrix(z - h)?;
            let diff = fwd
                .add(&bwd.scale(-ONE))
                .scale(Complex64::new(0.5 / h, 0.0));
            residual = residual.max(diff.max_abs_diff(&gamma.mul(&input.h_matrix(z)?)));
        }
        Ok(vec![IdentityReport::upper(
            Self::NAME,
            input.params_with(json!({"h": h})),
            residual,
            1e-6,
        )])
    }
}

check!(Surface, "surface", [Demoivre]);
impl IdentityCheck for Surface {
    impl_meta!();

    /// `h_0² − α h_1² = 1` (n = 2), `x³ + αy³ + α²z³ − 3αxyz = 1` (n = 3).
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let name = match input.n() {
            2 => "quadratic_surface",
            3 => "cubic_surface",
            _ => return Ok(vec![]),
        };
        let mut residual = 0.0f64;
        for &(z, _) in &input.points {
            let v = input.h(fit(z, input.domain()))?;
            let value = surface_polynomial(&v, input.alpha()).expect("n is 2 or 3");
            residual = residual.max(rel_residual(value, ONE));
        }
        Ok(vec![IdentityReport::upper(
            name,
            input.base_params(),
            residual,
            1e-10,
        )])
    }
}

check!(ProductFormula, "product_formula", [Demoivre]);
impl IdentityCheck for ProductFormula {
    impl_meta!();

    /// `h_0(a) h_l(b) = (1/n) Σ_k h_l(b + ω^k a)`. The residual of the
    /// arguments-swapped variant `h_l(a + ω^k b)` is logged in `params`.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let n = input.n();
        let limit = input.domain() / 2.0;
        let mut residual = 0.0f64;
        let mut swapped = 0.0f64;
        for &(a, b) in &input.points {
            let (a, b) = (fit(a, limit), fit(b, limit));
            let ha = input.h(a)?;
            let hb = input.h(b)?;
            for (l, &hbl) in hb.iter().enumerate() {
                let mut sum = ZERO;
                let mut sum_swapped = ZERO;
                for k in 0..n as i64 {
                    let w = input.ctx.omega_pow(k);
                    sum += input.family.eval(l, b + w * a, EvalMethod::Series)?;
                    sum_swapped += input.family.eval(l, a + w * b, EvalMethod::Series)?;
                }
                residual = residual.max(rel_residual(ha[0] * hbl, sum / n as f64));
                swapped = swapped.max(rel_residual(ha[0] * hbl, sum_swapped / n as f64));
            }
        }
        Ok(vec![IdentityReport::upper(
            Self::NAME,
            input.params_with(json!({"swapped_argument_residual": swapped})),
            residual,
            1e-10,
        )])
    }
}

check!(AdditionFormula, "addition_formula", [Demoivre]);
impl IdentityCheck for AdditionFormula {
    impl_meta!();

    /// `h_k(x+y) = Σ_i h_i(x) h_{k∸i}(y)`, with a factor α whenever `i > k`.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let n = input.n();
        let limit = input.domain() / 2.0;
        let mut residual = 0.0f64;
        for &(x, y) in &input.points {
            let (x, y) = (fit(x, limit), fit(y, limit));
            let hx = input.h(x)?;
            let hy = input.h(y)?;
            let hxy = input.h(x + y)?;
            for k in 0..n {
                let sum: Complex64 = (0..n)
                    .map(|i| {
                        let wrap = if i > k { input.alpha() } else { ONE };
                        hx[i] * hy[input.ctx.sub(k, i)] * wrap
                    })
                    .sum();
                residual = residual.max(rel_residual(sum, hxy[k]));
            }
        }
        Ok(vec![IdentityReport::upper(
            Self::NAME,
            input.base_params(),
            residual,
            1e-10,
        )])
    }
}

check!(TripleArgument, "triple_argument", [Demoivre]);
impl IdentityCheck for TripleArgument {
    impl_meta!();

    /// n = 3, α = 1: `h_0(3x) = h_0³ + h_1³ + h_2³ + 6 h_0 h_1 h_2`, the cubic
    /// determinant identity, and `h_0 h_1 h_2 = (h_0(3x) − 1)/9`.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        if input.n() != 3 || !input.is_classical() {
            return Ok(vec![]);
        }
        let mut triple = 0.0f64;
        let mut cubic = 0.0f64;
        let mut product = 0.0f64;
        let mut printed = 0.0f64;
        for &(x, _) in &input.points {
            let x = fit(x, input.domain() / 3.0);
            let h = input.h(x)?;
            let h0_3x = input.family.eval(0, x * 3.0, EvalMethod::Series)?;
            let cubes = h[0].powu(3) + h[1].powu(3) + h[2].powu(3);
            let prod = h[0] * h[1] * h[2];
            triple = triple.max(rel_residual(cubes + prod * 6.0, h0_3x));
            cubic = cubic.max(rel_residual(cubes - prod * 3.0, ONE));
            product = product.max(rel_residual(prod, (h0_3x - ONE) / 9.0));
            printed = printed.max(rel_residual(h[0] * h[1] * h[1], (h0_3x - ONE) / 9.0));
        }
        Ok(vec![
            IdentityReport::upper(Self::NAME, input.base_params(), triple, 1e-10),
            IdentityReport::upper("cubic_identity", input.base_params(), cubic, 1e-10),
            IdentityReport::upper(
                "triple_product",
                input.params_with(json!({"printed_h0_h1_h1_residual": printed})),
                product,
                1e-10,
            ),
        ])
    }
}

/// `det C^α(L)(z)` by LU and by the spectrum, against `Π_l L(ω^l r z)`.
fn det_product_residuals(
    input: &CheckInput,
    l: &TruncatedSeries,
    z: Complex64,
) -> Result<(f64, f64, Complex64)> {
    let (ctx, a) = (&input.ctx, &input.root);
    let vals = (0..ctx.n())
        .map(|k| laurent_component(l, ctx, a, k)?.evaluate(z))
        .collect::<Result<Vec<_>>>()?;
    let direct = circulant_det_direct(&circulant_from_components(&vals, a.alpha())?);
    let spectral = circulant_det_spectral(&vals, ctx, a)?;
    let rhs = det_product_rhs(|x| l.evaluate(x), ctx, a, z)?;
    Ok((
        rel_residual(direct, rhs),
        rel_residual(spectral, direct),
        rhs,
    ))
}

/// Keeps `|rz| ≤ 1/2` and `|z|` inside the geometric domain.
fn geometric_limit(input: &CheckInput) -> f64 {
    (0.5 / input.root.root().norm()).min(0.5)
}

check!(DetProduct, "det_product", [Demoivre, Circulant]);
impl IdentityCheck for DetProduct {
    impl_meta!();

    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let exp = TruncatedSeries::exp(input.cfg.trunc);
        let geometric = TruncatedSeries::geometric(input.cfg.trunc.max(128));
        let mut exp_res = 0.0f64;
        let mut geo_res = 0.0f64;
        for &(z, _) in &input.points {
            exp_res = exp_res.max(det_product_residuals(input, &exp, fit(z, input.domain()))?.0);
            let zg = fit(z, geometric_limit(input));
            geo_res = geo_res.max(det_product_residuals(input, &geometric, zg)?.0);
        }
        Ok(vec![
            IdentityReport::upper(
                "det_product",
                input.params_with(json!({"series": "exp"})),
                exp_res,
                1e-9,
            ),
            IdentityReport::upper(
                "det_product",
                input.params_with(json!({"series": "geometric"})),
                geo_res,
                1e-9,
            ),
        ])
    }
}

check!(SpectralVsDirect, "spectral_vs_direct", [Circulant]);
impl IdentityCheck for SpectralVsDirect {
    impl_meta!();

    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let exp = TruncatedSeries::exp(input.cfg.trunc);
        let geometric = TruncatedSeries::geometric(input.cfg.trunc.max(128));
        let mut residual = 0.0f64;
        for &(z, w) in &input.points {
            residual = residual.max(det_product_residuals(input, &exp, fit(z, input.domain()))?.1);
            let zg = fit(z, geometric_limit(input));
            residual = residual.max(det_product_residuals(input, &geometric, zg)?.1);
            // arbitrary components built from the sample
            let comps: Vec<Complex64> = (0..input.n())
                .map(|k| z.powu(k as u32) + w * (k as f64 + 0.5))
                .collect();
            let m = circulant_from_components(&comps, input.alpha())?;
            let direct = circulant_det_direct(&m);
            let spectral = circulant_det_spectral(&comps, &input.ctx, &input.root)?;
            residual = residual.max(rel_residual(spectral, direct));
        }
        Ok(vec![IdentityReport::upper(
            Self::NAME,
            input.base_params(),
            residual,
            1e-9,
        )])
    }
}

check!(GeometricDeterminant, "geometric_determinant", [Circulant]);
impl IdentityCheck for GeometricDeterminant {
    impl_meta!();

    /// At `z = 0.3`: `det C^α(g)(z) = 1/(1 − α zⁿ)` through both determinant routes.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let z = Complex64::new(0.3, 0.0);
        let (ctx, a) = (&input.ctx, &input.root);
        let geometric = TruncatedSeries::geometric(input.cfg.trunc.max(256));
        let vals = (0..ctx.n())
            .map(|k| laurent_component(&geometric, ctx, a, k)?.evaluate(z))
            .collect::<Result<Vec<_>>>()?;
        let direct = circulant_det_direct(&circulant_from_components(&vals, a.alpha())?);
        let spectral = circulant_det_spectral(&vals, ctx, a)?;
        let want = (ONE - a.alpha() * z.powu(ctx.n() as u32)).inv();
        let residual = rel_residual(direct, want).max(rel_residual(spectral, want));
        Ok(vec![IdentityReport::upper(
            Self::NAME,
            input.params_with(json!({
                "z": cjson(z), "expected": cjson(want),
                "spectral": cjson(spectral), "direct": cjson(direct),
            })),
            residual,
            1e-9,
        )])
    }
}

check!(NonExpGroupLaw, "non_exp_group_law", [Circulant]);
impl IdentityCheck for NonExpGroupLaw {
    impl_meta!();

    /// The geometric circulants break the group law; exp and `S(2) exp` keep it.
    /// At α = 0 the circulants are unipotent triangular and for n = 2 every
    /// series with `a_0 = 1` obeys the group law, so the breaking claim is skipped.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let (ctx, a) = (&input.ctx, &input.root);
        if a.is_zero() {
            return Ok(vec![]);
        }
        let z = Complex64::new(0.2, 0.0);
        let trunc = input.cfg.trunc;
        let mut reports =
            negative_check_non_exp(&TruncatedSeries::geometric(trunc.max(128)), ctx, a, z, z)?;
        let controls = [
            ("exp", TruncatedSeries::exp(trunc)),
            (
                "scaled_exp",
                TruncatedSeries::exp(trunc).scale_argument(Complex64::new(2.0, 0.0))?,
            ),
        ];
        for (label, l) in controls {
            let probe = group_law_probe(&l, ctx, a, z, z)?;
            reports.push(IdentityReport::upper(
                "exp_group_law_control",
                input.params_with(json!({"series": label, "z": cjson(z), "w": cjson(z)})),
                probe.group_law,
                1e-10,
            ));
        }
        Ok(reports)
    }
}

check!(GammaGenerator, "gamma_generator", [Circulant]);
impl IdentityCheck for GammaGenerator {
    impl_meta!();

    /// `γ(α)ⁿ = αI` and `tr γ(α) = 0`.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let g = gamma_matrix(input.n(), input.alpha())?;
        let want = ComplexMatrix::identity(input.n()).scale(input.alpha());
        Ok(vec![
            IdentityReport::upper(
                "gamma_power",
                input.base_params(),
                g.pow(input.n() as u32).max_abs_diff(&want),
                1e-13,
            ),
            IdentityReport::upper("gamma_trace", input.base_params(), g.trace().norm(), 0.0),
        ])
    }
}

check!(Sylvester, "sylvester", [Circulant]);
impl IdentityCheck for Sylvester {
    impl_meta!();

    /// The DFT matrix is unitary and diagonalizes the cyclic shift and the α = 1 circulants.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let n = input.n();
        let s = sylvester_matrix(&input.ctx);
        let sh = s.conj_transpose();
        let unitary = s.mul(&sh).max_abs_diff(&ComplexMatrix::identity(n));
        let shift = gamma_matrix(n, ONE)?;
        let diag = ComplexMatrix::from_fn(n, |i, j| {
            if i == j {
                input.ctx.omega_pow(i as i64)
            } else {
                ZERO
            }
        });
        let mut diagonalizes = sh.mul(&shift).mul(&s).max_abs_diff(&diag);
        let one = AlphaRoot::new(ONE, n, 0)?;
        let fam = HyperbolicFamily::build(n, &one, input.cfg.trunc)?;
        for &(z, _) in &input.points {
            let c = assembled_matrix(&fam, fit(z, 2.0))?;
            let d = sh.mul(&c).mul(&s);
            let off = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|ij| d[ij].norm())
                .fold(0.0, f64::max);
            diagonalizes = diagonalizes.max(off / c.max_abs().max(1.0));
        }
        Ok(vec![
            IdentityReport::upper("sylvester_unitary", json!({"n": n}), unitary, 1e-12),
            IdentityReport::upper(
                "sylvester_diagonalizes",
                json!({"n": n}),
                diagonalizes,
                1e-11,
            ),
        ])
    }
}

check!(GeneratorPowerSum, "circulant_generator_sum", [Circulant]);
impl IdentityCheck for GeneratorPowerSum {
    impl_meta!();

    /// `C^α(L)(z) = Σ_k L_k^α(z) γ(α)^k`.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let mut residual = 0.0f64;
        for &(z, _) in &input.points {
            let v = input.h(fit(z, input.domain()))?;
            let a = circulant_from_components(&v, input.alpha())?;
            let b = circulant_from_generator_powers(&v, input.alpha())?;
            residual = residual.max(a.max_abs_diff(&b));
        }
        Ok(vec![IdentityReport::upper(
            Self::NAME,
            input.base_params(),
            residual,
            1e-13,
        )])
    }
}

/// Degree-`deg` polynomial with coefficients drawn from the run's seed.
fn seeded_polynomial(seed: u64, salt: u64, deg: usize) -> Polynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    Polynomial::new(
        (0..=deg)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
}

fn q_params(input: &CheckInput, extra: Value) -> Value {
    let mut p = input.params_with(json!({"q": cjson(input.cfg.q)}));
    if let (Value::Object(b), Value::Object(e)) = (&mut p, extra) {
        b.extend(e);
    }
    p
}

check!(QLeibniz, "q_leibniz", [Qpsi]);
impl IdentityCheck for QLeibniz {
    impl_meta!();

    /// `∂_q(fg) = (∂_q f) g + (Qf)(∂_q g)` on random degree-12 polynomials.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let q = input.cfg.q;
        let mut residual = 0.0f64;
        for i in 0..input.points.len() as u64 {
            let f = seeded_polynomial(input.cfg.seed, 2 * i + 1, 12);
            let g = seeded_polynomial(input.cfg.seed, 2 * i + 2, 12);
            let lhs = poly_jackson(&f.mul(&g), q)?;
            let rhs = poly_jackson(&f, q)?
                .mul(&g)
                .add(&f.dilate(q).mul(&poly_jackson(&g, q)?));
            residual = residual.max(lhs.max_coeff_diff(&rhs) / rhs.max_abs_coeff().max(1.0));
        }
        Ok(vec![IdentityReport::upper(
            Self::NAME,
            q_params(input, json!({"degree": 12})),
            residual,
            1e-11,
        )])
    }
}

check!(JacksonRoutes, "jackson_routes", [Qpsi]);
impl IdentityCheck for JacksonRoutes {
    impl_meta!();

    /// Coefficient rule against the difference quotient at 32 points of `|x| = 1/2`.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let q = input.cfg.q;
        let p = seeded_polynomial(input.cfg.seed, 99, 12).to_series();
        let coeff_rule = jackson_derivative(&p, q)?;
        let mut residual = 0.0f64;
        for j in 0..32 {
            let x = Complex64::from_polar(0.5, std::f64::consts::TAU * (j as f64 + 0.5) / 32.0);
            let a = coeff_rule.evaluate(x)?;
            let b = jackson_difference_quotient(&p, q, x)?;
            residual = residual.max(rel_residual(b, a));
        }
        Ok(vec![IdentityReport::upper(
            Self::NAME,
            q_params(input, json!({"points": 32})),
            residual,
            1e-10,
        )])
    }
}

fn q_sequence(input: &CheckInput) -> Result<PsiSequence> {
    PsiSequence::q(input.cfg.q, input.cfg.trunc.max(16))
}

check!(DerivativeLadder, "derivative_ladder", [Qpsi]);
impl IdentityCheck for DerivativeLadder {
    impl_meta!();

    /// `∂_q^k h_{q,l}^α = Π_{s=0}^{k-1} (1 + (α−1)δ_{0,l∸s}) h_{q,l∸k}^α` for k = 1..n.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let q = input.cfg.q;
        let ps = q_sequence(input)?;
        let trunc = input.cfg.trunc;
        let fam = build_psi_hyperbolic(&ps, &input.ctx, &input.root, trunc)?;
        let n = input.n();
        let mut residual = 0.0f64;
        for l in 0..n {
            let mut d = fam.component(l).clone();
            let mut factor = ONE;
            for k in 1..=n {
                d = jackson_derivative(&d, q)?;
                if input.ctx.sub(l, k - 1) == 0 {
                    factor *= input.alpha();
                }
                let want = fam.component(input.ctx.sub(l, k % n)).scale(factor);
                residual = residual.max(window_residual(&d, &want, 0, (trunc - k) as i64));
            }
        }
        Ok(vec![IdentityReport::upper(
            Self::NAME,
            q_params(input, json!({"trunc": trunc})),
            residual,
            1e-11,
        )])
    }
}

check!(PsiFamily, "psi_family", [Qpsi]);
impl IdentityCheck for PsiFamily {
    impl_meta!();

    /// Ω-eigenrelation of the q-hyperbolic components, agreement of their two
    /// evaluation routes, and `∂_ψ exp_ψ = exp_ψ`.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let ps = q_sequence(input)?;
        let trunc = input.cfg.trunc;
        let fam = build_psi_hyperbolic(&ps, &input.ctx, &input.root, trunc)?;
        let mut eigen = 0.0f64;
        for s in 0..input.n() {
            let comp = fam.component(s);
            let scaled = omega_scale(comp, &input.ctx)?;
            let want = comp.scale(input.ctx.omega_pow(s as i64));
            eigen = eigen.max(scaled.max_coeff_diff(&want) / comp.max_abs_coeff().max(1.0));
        }
        let mut reports = vec![IdentityReport::upper(
            "psi_omega_eigenrelation",
            q_params(input, json!({})),
            eigen,
            1e-13,
        )];
        if !input.root.is_zero() {
            let mut agree = 0.0f64;
            for &(z, _) in &input.points {
                let z = fit(z, 0.99 * fam.domain().max_abs_arg);
                for s in 0..input.n() {
                    let x = fam.eval(s, z, EvalMethod::Series)?;
                    let y = fam.eval(s, z, EvalMethod::Closed)?;
                    agree = agree.max(rel_residual(x, y));
                }
            }
            reports.push(IdentityReport::upper(
                "psi_series_closed_agreement",
                q_params(input, json!({})),
                agree,
                1e-10,
            ));
        }
        let e = series_exp_psi(&ps, trunc)?;
        let fixed = psi_derivative(&e, &ps)?.max_coeff_diff(&series_exp_psi(&ps, trunc - 1)?)
            / e.max_abs_coeff().max(1.0);
        reports.push(IdentityReport::upper(
            "exp_psi_fixed_point",
            q_params(input, json!({})),
            fixed,
            1e-13,
        ));
        Ok(reports)
    }
}

check!(LaguerreBasic, "q_laguerre", [Qpsi]);
impl IdentityCheck for LaguerreBasic {
    impl_meta!();

    /// `p_0 = 1`, `p_n(0) = 0`, `deg p_n = n` and `Q(∂_q) p_n = n_q p_{n−1}` for n ≤ 5.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let ps = q_sequence(input)?;
        let family = (0..=5)
            .map(|n| basic_laguerre(n, &ps))
            .collect::<Result<Vec<_>>>()?;
        let mut structural =
            (family[0].clone().add(&Polynomial::one().scale(-ONE))).max_abs_coeff();
        let mut lowering = 0.0f64;
        for n in 1..=5 {
            let p = &family[n];
            structural = structural.max(p.eval(ZERO).norm());
            if p.degree() != n {
                structural = f64::INFINITY;
            }
            let lhs = lowering_operator_apply_psi(p, &ps, n)?;
            let rhs = family[n - 1].scale(ps.number(n)?);
            lowering = lowering.max(lhs.max_coeff_diff(&rhs) / rhs.max_abs_coeff().max(1.0));
        }
        Ok(vec![
            IdentityReport::upper(
                "q_laguerre_basic",
                q_params(input, json!({"max_n": 5})),
                structural,
                0.0,
            ),
            IdentityReport::upper(
                "q_laguerre_lowering",
                q_params(input, json!({"max_n": 5})),
                lowering,
                1e-10,
            ),
        ])
    }
}

check!(QOneContinuity, "q_one_continuity", [Qpsi]);
impl IdentityCheck for QOneContinuity {
    impl_meta!();

    /// Every q-object at `q = 1 + 1e-8` against its classical counterpart, relative.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let report = q_one_continuity(&input.ctx, &input.root)?;
        Ok(vec![IdentityReport::upper(
            Self::NAME,
            input.params_with(json!({"q": cjson(Complex64::new(1.0 + 1e-8, 0.0)), "trunc": 32})),
            report,
            1e-5,
        )])
    }
}

/// Largest relative deviation of q-objects at `q = 1 + 1e-8` from their classical limits.
pub fn q_one_continuity(ctx: &CyclicContext, a: &AlphaRoot) -> Result<f64> {
    const CAP: usize = 32;
    let q = Complex64::new(1.0 + 1e-8, 0.0);
    let qs = PsiSequence::q(q, CAP)?;
    let cl = PsiSequence::classical(CAP);
    let rel = |x: Complex64, y: Complex64| {
        if y == ZERO {
            x.norm()
        } else {
            (x - y).norm() / y.norm()
        }
    };
    let mut worst = 0.0f64;
    for n in 0..=CAP {
        worst = worst.max(rel(qs.number(n)?, cl.number(n)?));
        worst = worst.max(rel(qs.factorial(n)?, cl.factorial(n)?));
        for k in 0..=n.min(12) {
            worst = worst.max(rel(qs.binomial(n, k)?, cl.binomial(n, k)?));
        }
    }
    let eq = series_exp_psi(&qs, CAP)?;
    let ec = TruncatedSeries::exp(CAP);
    for d in 0..=CAP as i64 {
        worst = worst.max(rel(eq.coeff(d), ec.coeff(d)));
    }
    let fq = build_psi_hyperbolic(&qs, ctx, a, CAP)?;
    let fc = HyperbolicFamily::build(ctx.n(), a, CAP)?;
    for s in 0..ctx.n() {
        for d in 0..=CAP as i64 {
            worst = worst.max(rel(fq.component(s).coeff(d), fc.component(s).coeff(d)));
        }
    }
    for n in 0..=5 {
        let lq = basic_laguerre(n, &qs)?;
        let lc = basic_laguerre(n, &cl)?;
        for k in 0..=n {
            worst = worst.max(rel(lq.coeff(k), lc.coeff(k)));
        }
    }
    let p = Polynomial::new(
        (0..=12)
            .map(|k| Complex64::new(1.0 + k as f64, 0.5 - k as f64))
            .collect(),
    );
    let dq = poly_jackson(&p, q)?;
    let dc = p.to_series().derivative();
    for k in 0..12 {
        worst = worst.max(rel(dq.coeff(k), dc.coeff(k as i64)));
    }
    Ok(worst)
}

check!(PsiBinomial, "psi_binomial", [Qpsi]);
impl IdentityCheck for PsiBinomial {
    impl_meta!();

    /// `E^y(∂_ψ) p_n(x) = Σ_k (n choose k)_ψ p_k(x) p_{n−k}(y)` for monomials (n ≤ 6)
    /// and the q-Laguerre sequence (n ≤ 4), plus the plain `p_n(x+y)` form for classical ψ.
    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let ps = q_sequence(input)?;
        let monomials: Vec<Polynomial> = (0..=6).map(Polynomial::monomial).collect();
        let laguerre = (0..=4)
            .map(|n| basic_laguerre(n, &ps))
            .collect::<Result<Vec<_>>>()?;
        let classical = PsiSequence::classical(8);
        let falling: Vec<Polynomial> = (0..=6)
            .map(|n| {
                (0..n).fold(Polynomial::one(), |acc, j| {
                    acc.mul(&Polynomial::new(vec![
                        Complex64::new(-(j as f64), 0.0),
                        ONE,
                    ]))
                })
            })
            .collect();
        let mut mono = 0.0f64;
        let mut lag = 0.0f64;
        let mut plain = 0.0f64;
        for &(x, y) in &input.points {
            mono = mono.max(verify_psi_binomial(&monomials, &ps, x, y)?.residual);
            lag = lag.max(verify_psi_binomial(&laguerre, &ps, x, y)?.residual);
            for fam in [&monomials, &falling] {
                for (n, p) in fam.iter().enumerate() {
                    let rhs: Complex64 = (0..=n)
                        .map(|k| {
                            Ok(classical.binomial(n, k)? * fam[k].eval(x) * fam[n - k].eval(y))
                        })
                        .sum::<Result<Complex64>>()?;
                    plain = plain.max(rel_residual(p.eval(x + y), rhs));
                    let shifted = generalized_translation(p, y, &classical)?.eval(x);
                    plain = plain.max(rel_residual(shifted, rhs));
                }
            }
        }
        Ok(vec![
            IdentityReport::upper(
                "psi_binomial_monomials",
                q_params(input, json!({"max_n": 6})),
                mono,
                1e-11,
            ),
            IdentityReport::upper(
                "psi_binomial_laguerre",
                q_params(input, json!({"max_n": 4})),
                lag,
                1e-9,
            ),
            IdentityReport::upper("classical_binomial", json!({"max_n": 6}), plain, 1e-11),
        ])
    }
}

check!(GeneratingFunction, "generating_function", [Qpsi]);
impl IdentityCheck for GeneratingFunction {
    impl_meta!();

    fn run(&self, input: &CheckInput) -> Result<Vec<IdentityReport>> {
        let ps = q_sequence(input)?;
        let trunc = input.cfg.trunc;
        let domain = build_psi_hyperbolic(&ps, &input.ctx, &input.root, trunc)?
            .domain()
            .max_abs_arg;
        let mut residual = 0.0f64;
        for &(x, z) in &input.points {
            // keep x z inside the family's domain
            let z = fit(z, (0.99 * domain / x.norm().max(1e-300)).min(1.0));
            for s in 0..input.n() {
                let report =
                    verify_generating_function(&ps, &input.ctx, &input.root, s, x, z, trunc)?;
                residual = residual.max(report.residual);
            }
        }
        Ok(vec![IdentityReport::upper(
            Self::NAME,
            q_params(input, json!({"trunc": trunc})),
            residual,
            1e-9,
        )])
    }
}

/// Builds the check input and runs the selected suites with the builtin registry.
pub fn run_suites(selection: SuiteSelection, cfg: SuiteConfig) -> Result<Vec<IdentityReport>> {
    let input = CheckInput::new(cfg)?;
    Ok(CheckRegistry::builtin().run(selection, &input))
}
