//! `cyclofun`: decompose series over `Z_n`, evaluate α-hyperbolic functions,
//! compute α-circulant determinants and run the identity suites.

mod complex_arg;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cyclofun::demoivre::{circulant_det_direct, circulant_det_spectral, circulant_from_components};
use cyclofun::psi::{build_psi_hyperbolic, series_exp_psi, PsiSequence};
use cyclofun::report::{cjson, IdentityReport};
use cyclofun::series::SeriesJson;
use cyclofun::suite::{run_suites, SuiteConfig, SuiteSelection};
use cyclofun::{
    laurent_component, project_series, AlphaRoot, CyclicContext, EvalMethod, HyperbolicFamily,
    TruncatedSeries,
};
use num_complex::Complex64;
use serde_json::json;
use thiserror::Error;

use complex_arg::parse_complex;

/// Tolerance for the decomposition re-check and the eval cross-check.
const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("internal verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Domain(_) => 4,
        }
    }
}

impl From<cyclofun::Error> for CliError {
    fn from(e: cyclofun::Error) -> Self {
        match e {
            cyclofun::Error::Domain { .. } => CliError::Domain(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "cyclofun",
    version,
    about = "Cyclic-group decompositions, α-hyperbolic functions and circulant identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a series into its n α-projected components.
    Decompose(DecomposeArgs),
    /// Evaluate one α-hyperbolic component h_s^α(z).
    Eval(EvalArgs),
    /// Run identity suites and report residuals.
    Verify(VerifyArgs),
    /// α-circulant determinant via the spectrum and via LU.
    Det(DetArgs),
}

#[derive(Args, Clone)]
struct Common {
    /// Cyclic order n ≥ 2.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Twist α. Complex values: "re", "re+imi" or "re,im".
    #[arg(long, default_value = "1", value_parser = parse_complex, allow_hyphen_values = true)]
    alpha: Complex64,
    /// Branch b of r = α^{1/n} ω^b.
    #[arg(long, default_value_t = 0)]
    branch: usize,
    /// Deformation parameter q ≠ 1 (complex syntax as for --alpha).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    q: Option<Complex64>,
    /// Truncation order N ≥ n.
    #[arg(long, default_value_t = 64)]
    trunc: usize,
    /// Tolerance; replaces every upper-bound tolerance of `verify`.
    #[arg(long, env = "CYCLOFUN_TOL")]
    tol: Option<f64>,
    /// Seed of the random sample points.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn validate(&self) -> Result<(), CliError> {
        if self.n < 2 {
            return Err(CliError::Input(format!(
                "--n must be at least 2, got {}",
                self.n
            )));
        }
        if self.trunc < self.n {
            return Err(CliError::Input(format!(
                "--trunc {} must be at least --n {}",
                self.trunc, self.n
            )));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Input(format!(
                    "tolerance must be positive, got {t}"
                )));
            }
        }
        Ok(())
    }

    fn root(&self) -> Result<(CyclicContext, AlphaRoot), CliError> {
        Ok((
            CyclicContext::new(self.n)?,
            AlphaRoot::new(self.alpha, self.n, self.branch)?,
        ))
    }

    fn q_sequence(&self) -> Result<PsiSequence, CliError> {
        let q = self
            .q
            .ok_or_else(|| CliError::Input("this command needs --q".into()))?;
        Ok(PsiSequence::q(q, self.trunc)?)
    }

    fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(path) => fs::write(path, text)?,
            None => io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Builtin {
    Exp,
    Geometric,
    Expq,
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    common: Common,
    #[arg(
        long,
        value_enum,
        conflicts_with = "input",
        required_unless_present = "input"
    )]
    builtin: Option<Builtin>,
    /// Series JSON file (`-` for stdin): {"min_deg": int, "coeffs": [[re, im], ...]}.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    common: Common,
    /// `exp` for h_s^α, `expq` for the q-deformed family (needs --q).
    #[arg(long, value_enum, default_value = "exp")]
    family: Builtin,
    /// Component index in Z_n.
    #[arg(long, default_value_t = 0)]
    s: usize,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    z: Complex64,
    #[arg(long, default_value = "series")]
    method: EvalMethod,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// demoivre | circulant | qpsi | all
    #[arg(long, default_value = "all")]
    suite: SuiteSelection,
    /// Number of random (z, w) pairs per check.
    #[arg(long, default_value_t = 1)]
    samples: usize,
}

#[derive(Args)]
struct DetArgs {
    #[command(flatten)]
    common: Common,
    /// Circulant components c_0 … c_{n-1}; their count sets n.
    #[arg(long = "component", value_parser = parse_complex, allow_hyphen_values = true,
          conflicts_with = "builtin", required_unless_present = "builtin")]
    components: Vec<Complex64>,
    /// Take the components L_k^α(z) of a builtin series instead.
    #[arg(long, value_enum, requires = "z")]
    builtin: Option<Builtin>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    z: Option<Complex64>,
}

fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_c(z: Complex64) -> String {
    format!("{} {}", fmt_f(z.re), fmt_f(z.im))
}

fn json_text<T: serde::Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn builtin_series(which: Builtin, common: &Common) -> Result<TruncatedSeries, CliError> {
    Ok(match which {
        Builtin::Exp => TruncatedSeries::exp(common.trunc),
        Builtin::Geometric => TruncatedSeries::geometric(common.trunc),
        Builtin::Expq => series_exp_psi(&common.q_sequence()?, common.trunc)?,
    })
}

fn read_series(path: &PathBuf) -> Result<TruncatedSeries, CliError> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    let json: SeriesJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: malformed series JSON: {e}", path.display())))?;
    Ok(TruncatedSeries::from_json(json)?)
}

fn decompose(args: DecomposeArgs) -> Result<u8, CliError> {
    let common = &args.common;
    common.validate()?;
    let (ctx, a) = common.root()?;
    let base = match (args.builtin, &args.input) {
        (Some(b), _) => builtin_series(b, common)?,
        (None, Some(path)) => read_series(path)?,
        (None, None) => unreachable!("clap requires one source"),
    };
    let components = (0..ctx.n())
        .map(|k| Ok(project_series(&base, &ctx, k, &a)?.with_label(format!("h_{k}"))))
        .collect::<Result<Vec<_>, CliError>>()?;

    // Σ_k r^k Π_k^α s must give back S(r) s; at α = 1 that is s itself.
    let r = a.root();
    let resolved = components.iter().enumerate().fold(
        TruncatedSeries::monomial(0, Complex64::new(0.0, 0.0))?,
        |acc, (k, c)| acc.add(&c.scale(cyclofun::series::pow_i64(r, k as i64))),
    );
    let expected = base.scale_argument(r)?;
    let tol = common.tol.unwrap_or(DEFAULT_TOL);
    let residual = resolved.max_coeff_diff(&expected) / expected.max_abs_coeff().max(1.0);
    if residual.is_nan() || residual > tol {
        return Err(CliError::Verification(format!(
            "components do not resolve the input: residual {} > {}",
            fmt_f(residual),
            fmt_f(tol)
        )));
    }

    let text = match common.format.unwrap_or(Format::Json) {
        Format::Json | Format::Csv => {
            let arr: Vec<SeriesJson> = components.iter().map(|c| c.to_json()).collect();
            json_text(&arr)
        }
        Format::Text => {
            let mut out = String::new();
            for c in &components {
                out.push_str(&format!("# {}\n", c.label().unwrap_or("")));
                for d in c.degrees() {
                    let v = c.coeff(d);
                    if v != Complex64::new(0.0, 0.0) {
                        out.push_str(&format!("{d} {}\n", fmt_c(v)));
                    }
                }
            }
            out
        }
    };
    common.emit(&text)?;
    Ok(0)
}

fn eval(args: EvalArgs) -> Result<u8, CliError> {
    let common = &args.common;
    common.validate()?;
    let (ctx, a) = common.root()?;
    let family = match args.family {
        Builtin::Exp => HyperbolicFamily::build(ctx.n(), &a, common.trunc)?,
        Builtin::Expq => build_psi_hyperbolic(&common.q_sequence()?, &ctx, &a, common.trunc)?,
        Builtin::Geometric => {
            return Err(CliError::Input(
                "eval supports the exp and expq families".into(),
            ))
        }
    };
    let s = args.s % ctx.n();
    let value = family.eval(s, args.z, args.method)?;

    let other = match args.method {
        EvalMethod::Series => EvalMethod::Closed,
        EvalMethod::Closed => EvalMethod::Series,
    };
    let tol = common.tol.unwrap_or(DEFAULT_TOL);
    let mut discrepancy = None;
    match family.eval(s, args.z, other) {
        Ok(check) => {
            let d = cyclofun::report::rel_residual(check, value);
            if d.is_nan() || d > tol {
                eprintln!(
                    "warning: series and closed forms differ by {} (tolerance {})",
                    fmt_f(d),
                    fmt_f(tol)
                );
            }
            discrepancy = Some(d);
        }
        Err(cyclofun::Error::AlphaZero) => {}
        Err(e) => return Err(e.into()),
    }

    let text = match common.format.unwrap_or(Format::Text) {
        Format::Text | Format::Csv => format!("{}\n", fmt_c(value)),
        Format::Json => json_text(&json!({
            "n": ctx.n(), "alpha": cjson(a.alpha()), "branch": a.branch(), "s": s,
            "z": cjson(args.z), "method": args.method, "value": cjson(value),
            "cross_check_residual": discrepancy,
        })),
    };
    common.emit(&text)?;
    Ok(0)
}

fn reports_csv(reports: &[IdentityReport]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| CliError::Io(io::Error::other(e));
    w.write_record(["identity", "n", "alpha_re", "alpha_im", "residual", "pass"])
        .map_err(io_err)?;
    for r in reports {
        let n = r.params.get("n").map(|v| v.to_string()).unwrap_or_default();
        let alpha = r.params.get("alpha").and_then(|v| v.as_array());
        let part = |i: usize| {
            alpha
                .and_then(|a| a.get(i))
                .and_then(|v| v.as_f64())
                .map(fmt_f)
                .unwrap_or_default()
        };
        w.write_record([
            r.identity.clone(),
            n,
            part(0),
            part(1),
            fmt_f(r.residual),
            r.pass.to_string(),
        ])
        .map_err(io_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Io(io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn verify(args: VerifyArgs) -> Result<u8, CliError> {
    let common = &args.common;
    common.validate()?;
    if args.samples == 0 {
        return Err(CliError::Input("--samples must be positive".into()));
    }
    let cfg = SuiteConfig {
        n: common.n,
        alpha: common.alpha,
        branch: common.branch,
        q: common.q.unwrap_or(SuiteConfig::default().q),
        trunc: common.trunc,
        seed: common.seed,
        samples: args.samples,
        tolerance: common.tol,
    };
    let reports = run_suites(args.suite, cfg)?;
    let text = match common.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&reports),
        Format::Csv => reports_csv(&reports)?,
        Format::Text => reports
            .iter()
            .map(|r| {
                format!(
                    "{} {} residual={} tolerance={}\n",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.identity,
                    fmt_f(r.residual),
                    fmt_f(r.tolerance)
                )
            })
            .collect(),
    };
    common.emit(&text)?;
    Ok(if reports.iter().all(|r| r.pass) { 0 } else { 1 })
}

fn det(args: DetArgs) -> Result<u8, CliError> {
    let mut common = args.common.clone();
    let components = if let Some(which) = args.builtin {
        common.validate()?;
        let z = args.z.expect("clap requires --z");
        let (ctx, a) = common.root()?;
        let base = builtin_series(which, &common)?;
        (0..ctx.n())
            .map(|k| Ok(laurent_component(&base, &ctx, &a, k)?.evaluate(z)?))
            .collect::<Result<Vec<_>, CliError>>()?
    } else {
        common.n = args.components.len();
        common.trunc = common.trunc.max(common.n);
        common.validate()?;
        args.components.clone()
    };
    let (ctx, a) = common.root()?;
    let spectral = circulant_det_spectral(&components, &ctx, &a)?;
    let direct = circulant_det_direct(&circulant_from_components(&components, a.alpha())?);
    let discrepancy = (spectral - direct).norm();
    let text = match common.format.unwrap_or(Format::Text) {
        Format::Text | Format::Csv => format!(
            "spectral {}\ndirect {}\ndiscrepancy {}\n",
            fmt_c(spectral),
            fmt_c(direct),
            fmt_f(discrepancy)
        ),
        Format::Json => json_text(&json!({
            "n": ctx.n(), "alpha": cjson(a.alpha()),
            "components": components.iter().map(|c| cjson(*c)).collect::<Vec<_>>(),
            "spectral": cjson(spectral), "direct": cjson(direct), "discrepancy": discrepancy,
        })),
    };
    common.emit(&text)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decompose(a) => decompose(a),
        Command::Eval(a) => eval(a),
        Command::Verify(a) => verify(a),
        Command::Det(a) => det(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
