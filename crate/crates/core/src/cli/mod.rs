//! Command-line front end.
//!
//! Every subcommand reads an optional TOML run configuration (a file path or
//! the name of a built-in preset), applies flag overrides, validates the
//! result and then computes. Files written with `--out` carry the seed and the
//! SHA-256 of the effective configuration, and a copy of that configuration
//! is written next to them as `<out>.config.toml`.

mod config;
mod format;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::closedform::{self, RegressionDesign, RegressionPrior};
use crate::conflict::{self, ConflictOptions, LogisticQuadrature, MethodChoice};
use crate::discretescan::{self, Axis, LogisticFamily};
use crate::modelprior::{validate, SampleSize, SamplingModel};
use crate::weakinfo::{Comparison, LevelVerdict, WiOptions};
use crate::{Error, Result};

pub use config::{AxisConfig, CalibrateConfig, RegressConfig, RunConfig, ScanConfig, ScanKind, PRESETS};
pub use format::sig6;

/// Environment variable giving the default number of worker threads.
pub const THREADS_ENV: &str = "PRIORINFO_THREADS";

#[derive(Debug, Parser)]
#[command(name = "priorinfo", version, about = "Prior-data conflict and weak informativity of Bayesian priors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Prior-data conflict P-value of the observed statistic under the base prior.
    Pvalue(Common),
    /// Weak informativity of the alternative prior relative to the base.
    Check(Common),
    /// Grid scan from the `[scan]` section, written as CSV.
    Scan(Common),
    /// Alternative variance giving a target reduction.
    Calibrate {
        #[command(flatten)]
        common: Common,
        /// `normal` or `t`.
        #[arg(long)]
        family: Option<String>,
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<f64>,
        #[arg(long = "sigma1-sq", allow_negative_numbers = true)]
        sigma1_sq: Option<f64>,
        /// Target reduction in [0, 1].
        #[arg(long, allow_negative_numbers = true)]
        p: Option<f64>,
        /// Sample size (`inf` for the limit).
        #[arg(long)]
        n: Option<String>,
    },
    /// The t-versus-normal variance-ratio threshold K(lambda).
    Kappa {
        #[command(flatten)]
        common: Common,
        #[arg(long, conflicts_with = "lambda_grid", allow_negative_numbers = true)]
        lambda: Option<f64>,
        /// CSV of K over log(lambda) in [-2, 6] with this many points.
        #[arg(long = "lambda-grid", num_args = 0..=1, default_missing_value = "201")]
        lambda_grid: Option<usize>,
    },
    /// Reduction in prior-data conflicts from using the alternative prior.
    Reduce(Common),
    /// Limiting verdicts for a normal linear regression prior.
    Regress(Common),
}

#[derive(Debug, Args, Clone, Default)]
struct Common {
    /// Run configuration: a TOML file or a preset name.
    #[arg(long)]
    config: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; a copy of the effective configuration goes next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Scan resolution, e.g. `50x50`.
    #[arg(long)]
    grid: Option<String>,
    /// Use the limiting (`n = inf`) model.
    #[arg(long)]
    asymptotic: bool,
    /// auto, enum, quad or mc.
    #[arg(long)]
    method: Option<String>,
}

/// Runs the CLI with `argv` (program name first) and returns the exit code:
/// 0 on success, 1 on invalid input, 2 on numerical failure.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    init_threads();
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn init_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Pvalue(c) => pvalue(&load(&c)?, &c, out),
        Command::Check(c) => check(&load(&c)?, &c, out),
        Command::Scan(c) => scan(&load(&c)?, &c, out),
        Command::Reduce(c) => reduce(&load(&c)?, &c, out),
        Command::Regress(c) => regress(&load(&c)?, &c, out),
        Command::Calibrate { common, family, lambda, sigma1_sq, p, n } => {
            let mut cfg = load(&common)?;
            let cal = cfg.calibrate.get_or_insert_with(CalibrateConfig::default);
            if let Some(f) = family {
                cal.family = f;
            }
            if lambda.is_some() {
                cal.lambda = lambda;
            }
            if let Some(s) = sigma1_sq {
                cal.sigma1_sq = s;
            }
            if let Some(p) = p {
                cal.p = p;
            }
            if let Some(n) = n {
                cal.n = Some(config::parse_sample_size(&n)?);
            }
            if common.asymptotic {
                cal.n = Some(SampleSize::Infinite);
            }
            calibrate(&cfg, &common, out)
        }
        Command::Kappa { common, lambda, lambda_grid } => {
            let cfg = load(&common)?;
            kappa(&cfg, &common, lambda, lambda_grid, out)
        }
    }
}

/// Reads the configuration and applies the shared flag overrides.
fn load(c: &Common) -> Result<RunConfig> {
    let mut cfg = match &c.config {
        Some(name) => RunConfig::load(name)?,
        None => RunConfig::default(),
    };
    if let Some(g) = c.gamma {
        cfg.gamma = Some(g);
    }
    if let Some(s) = c.seed {
        cfg.seed = Some(s);
    }
    if let Some(m) = &c.method {
        m.parse::<MethodChoice>()?;
        cfg.method = Some(m.clone());
    }
    if let Some(g) = &c.grid {
        let (a, b) = config::parse_grid(g)?;
        let scan = cfg.scan.as_mut().ok_or_else(|| Error::config("scan", "--grid needs a [scan] section"))?;
        scan.a.steps = a;
        scan.b.steps = b;
    }
    if c.asymptotic {
        cfg.make_asymptotic()?;
    }
    if let Some(g) = cfg.gamma {
        if !(g > 0.0 && g < 1.0) {
            return Err(Error::config("gamma", format!("must lie in (0, 1), got {g}")));
        }
    }
    Ok(cfg)
}

/// Writes `body` to `path` and the effective configuration beside it.
fn write_artifact(path: &Path, body: &str, cfg_text: &str) -> Result<()> {
    std::fs::write(path, body)?;
    let mut side = path.as_os_str().to_owned();
    side.push(".config.toml");
    std::fs::write(PathBuf::from(side), cfg_text)?;
    Ok(())
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    seed: u64,
    config_sha256: &'a str,
    result: T,
}

fn write_json<T: Serialize>(cfg: &RunConfig, c: &Common, result: T) -> Result<()> {
    if let Some(path) = &c.out {
        let (text, hash) = cfg.canonical()?;
        let env = Envelope { seed: cfg.seed(), config_sha256: &hash, result };
        let mut body = serde_json::to_string_pretty(&env).map_err(|e| Error::config("out", e.to_string()))?;
        body.push('\n');
        write_artifact(path, &body, &text)?;
    }
    Ok(())
}

fn wi_options(cfg: &RunConfig) -> WiOptions {
    WiOptions { mc_samples: cfg.mc_samples(), seed: cfg.seed(), logistic: LogisticQuadrature::default() }
}

fn pvalue(cfg: &RunConfig, c: &Common, out: &mut dyn Write) -> Result<()> {
    let model = cfg.model()?;
    let base = cfg.base()?;
    let t0 = cfg.observed(&model)?;
    let opts = ConflictOptions {
        method: cfg.method_choice()?,
        mc_samples: cfg.mc_samples(),
        seed: cfg.seed(),
        logistic: LogisticQuadrature::default(),
    };
    let r = conflict::conflict_pvalue_with(&model, &base, &t0, &opts)?;
    let se = r.mc_stderr.map(|s| format!(" stderr={}", sig6(s))).unwrap_or_default();
    writeln!(out, "pvalue={} method={}{se}", sig6(r.pvalue), r.method)?;
    let anc = if matches!(model, SamplingModel::ShiftedMultinomial { .. }) {
        let a = conflict::ancillary_conflict(&model, &base, &t0)?;
        writeln!(out, "pvalue_given_U1={} pvalue_given_U2={}", sig6(a.u1.pvalue), sig6(a.u2.pvalue))?;
        Some(a)
    } else {
        None
    };
    #[derive(Serialize)]
    struct PvalueOut {
        report: conflict::ConflictReport,
        ancillary: Option<conflict::AncillaryReport>,
    }
    write_json(cfg, c, PvalueOut { report: r, ancillary: anc })
}

fn comparison(cfg: &RunConfig) -> Result<(Comparison, f64)> {
    let model = cfg.model()?;
    let base = cfg.base()?;
    let alt = cfg.alt()?;
    validate(&model, &alt)?;
    Ok((Comparison::with_options(&model, &base, &alt, &wi_options(cfg))?, cfg.gamma()))
}

fn check(cfg: &RunConfig, c: &Common, out: &mut dyn Write) -> Result<()> {
    let (cmp, gamma) = comparison(cfg)?;
    let v = cmp.full_verdict(gamma)?;
    writeln!(out, "classification={}", v.classification())?;
    let red = v.reduction.map(sig6).unwrap_or_else(|| "undefined".into());
    let level = match v.level {
        LevelVerdict::Wi => "wi-at-level",
        LevelVerdict::NotWi => "not-wi-at-level",
        LevelVerdict::Indeterminate => "indeterminate",
    };
    writeln!(
        out,
        "level={level} gamma={} x_gamma={} conflict_prob={} reduction={red}",
        sig6(v.gamma),
        sig6(v.x_gamma),
        sig6(v.conflict_prob)
    )?;
    write_json(cfg, c, &v)
}

fn reduce(cfg: &RunConfig, c: &Common, out: &mut dyn Write) -> Result<()> {
    let (cmp, gamma) = comparison(cfg)?;
    let v = cmp.verdict(gamma)?;
    let r = v.reduction.ok_or_else(|| Error::domain("reduction is undefined when x_gamma = 0"))?;
    writeln!(out, "reduction={} x_gamma={} conflict_prob={}", sig6(r), sig6(v.x_gamma), sig6(v.conflict_prob))?;
    write_json(cfg, c, &v)
}

fn axis(a: &AxisConfig, key: &str) -> Result<Axis> {
    Axis::new(a.name.clone(), a.lo, a.hi, a.steps).map_err(|e| Error::config(key, e.to_string()))
}

fn scan(cfg: &RunConfig, c: &Common, out: &mut dyn Write) -> Result<()> {
    let sc = cfg.scan.as_ref().ok_or_else(|| Error::config("scan", "missing [scan] section"))?;
    let model = cfg.model()?;
    let base = cfg.base()?;
    let gamma = cfg.gamma();
    let seed = cfg.seed();
    let (a, b) = (axis(&sc.a, "scan.a")?, axis(&sc.b, "scan.b")?);
    let (text, hash) = cfg.canonical()?;
    let quad = LogisticQuadrature::default();
    let (csv, extra, summary) = match (sc.kind, &model) {
        (ScanKind::BetaBinomial, SamplingModel::Binomial { n }) => {
            let s = discretescan::betabinom_scan(*n, &base, gamma, &a, &b, seed)?;
            (s.to_csv(&hash), None, region_summary(&s))
        }
        (ScanKind::Logistic, SamplingModel::Logistic(d)) => {
            let fam = logistic_family(sc)?;
            if sc.reduction {
                let f = discretescan::logistic_reduction(d, &base, fam, gamma, &a, &b, &quad)?;
                let levels = sc.contours.clone().unwrap_or_else(|| vec![0.0, 0.25, 0.5, 0.75]);
                let lines = f.contours(&levels).len();
                let summary = format!("reduction field {}x{} x_gamma={} contours={lines}", a.steps, b.steps, sig6(f.x_gamma));
                (f.to_csv(seed, &hash), Some(f.contours_csv(&levels, seed, &hash)), summary)
            } else {
                let s = discretescan::logistic_scan(d, &base, fam, gamma, &a, &b, &quad, seed)?;
                (s.to_csv(&hash), None, region_summary(&s))
            }
        }
        (ScanKind::Multinomial, SamplingModel::ShiftedMultinomial { n }) => {
            let (u1, u2) = match (sc.u1, sc.u2) {
                (Some(u1), Some(u2)) => (u1, u2),
                _ => {
                    let t0 = cfg.observed(&model)?;
                    let counts = t0.as_counts().expect("multinomial statistic is counts");
                    (crate::modelprior::Ancillary::U1.value(counts), crate::modelprior::Ancillary::U2.value(counts))
                }
            };
            let s = discretescan::multinomial_ancillary_scan(*n, u1, u2, &base, gamma, &a, &b, seed)?;
            (s.to_csv(&hash), None, region_summary(&s))
        }
        (kind, m) => {
            return Err(Error::config("scan.kind", format!("{kind:?} scans need a matching model, got {}", m.name())));
        }
    };
    match &c.out {
        Some(path) => {
            write_artifact(path, &csv, &text)?;
            if let Some(extra) = extra {
                let mut p = path.as_os_str().to_owned();
                p.push(".contours.csv");
                std::fs::write(PathBuf::from(p), extra)?;
            }
            writeln!(out, "{summary}")?;
            writeln!(out, "wrote {}", path.display())?;
        }
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(())
}

fn region_summary(s: &discretescan::RegionScan) -> String {
    use discretescan::CellClass::*;
    format!(
        "cells={} uniformly-wi={} wi-at-level={} not-wi={} indeterminate={}",
        s.cells.len(),
        s.count(UniformlyWi),
        s.count(WiAtLevel),
        s.count(NotWi),
        s.count(Indeterminate)
    )
}

fn logistic_family(sc: &ScanConfig) -> Result<LogisticFamily> {
    let fam: LogisticFamily = sc.family.as_deref().unwrap_or("normal-normal").parse()?;
    Ok(match sc.lambda {
        Some(l) if l > 0.0 => fam.with_lambda(l),
        Some(l) => return Err(Error::config("scan.lambda", format!("must be positive, got {l}"))),
        None => fam,
    })
}

fn calibrate(cfg: &RunConfig, c: &Common, out: &mut dyn Write) -> Result<()> {
    let cal = cfg.calibrate.as_ref().expect("calibrate section is filled from flags");
    let gamma = cfg.gamma();
    let n = cal.n.unwrap_or(SampleSize::Infinite);
    let r = match cal.family.as_str() {
        "normal" => closedform::calibrate_normal(n, cal.sigma1_sq, gamma, cal.p),
        "t" => {
            let l = cal.lambda.ok_or_else(|| Error::config("calibrate.lambda", "required for the t family"))?;
            closedform::calibrate_t(n, l, cal.sigma1_sq, gamma, cal.p)
        }
        other => return Err(Error::config("calibrate.family", format!("expected normal or t, got {other:?}"))),
    }
    .map_err(|e| match e {
        Error::Domain(m) => Error::config("calibrate", m),
        other => other,
    })?;
    writeln!(
        out,
        "sigma2_sq={} ratio={} target_reduction={} gamma={} regime={}",
        sig6(r.parameter),
        sig6(r.ratio),
        sig6(r.target_reduction),
        sig6(r.gamma),
        r.regime
    )?;
    write_json(cfg, c, r)
}

fn kappa(cfg: &RunConfig, c: &Common, lambda: Option<f64>, grid: Option<usize>, out: &mut dyn Write) -> Result<()> {
    match (lambda, grid) {
        (Some(l), _) => {
            let k = closedform::kappa(l).map_err(|e| Error::config("lambda", e.to_string()))?;
            writeln!(out, "{}", sig6(k))?;
            #[derive(Serialize)]
            struct KappaOut {
                lambda: f64,
                kappa: f64,
            }
            write_json(cfg, c, KappaOut { lambda: l, kappa: k })
        }
        (None, Some(points)) => {
            if points < 2 {
                return Err(Error::config("lambda-grid", "needs at least 2 points"));
            }
            let (text, hash) = cfg.canonical()?;
            let mut csv = format!("# priorinfo kappa curve\n# seed={} config_sha256={hash}\nlog_lambda,lambda,kappa\n", cfg.seed());
            for i in 0..points {
                let x = -2.0 + 8.0 * i as f64 / (points - 1) as f64;
                let l = x.exp();
                csv.push_str(&format!("{x},{l},{}\n", closedform::kappa(l)?));
            }
            match &c.out {
                Some(p) => {
                    write_artifact(p, &csv, &text)?;
                    writeln!(out, "wrote {}", p.display())?;
                }
                None => out.write_all(csv.as_bytes())?,
            }
            Ok(())
        }
        (None, None) => Err(Error::config("lambda", "give --lambda F or --lambda-grid [N]")),
    }
}

fn regress(cfg: &RunConfig, c: &Common, out: &mut dyn Write) -> Result<()> {
    let r = cfg.regress.as_ref().ok_or_else(|| Error::config("regress", "missing [regress] section"))?;
    let design = RegressionDesign { n: r.n, k: r.k };
    let base = RegressionPrior {
        alpha: r.base.alpha,
        tau: r.base.tau,
        sigma: config::matrix(&r.base.sigma, "regress.base.sigma")?,
        lambda: f64::INFINITY,
    };
    let alt = RegressionPrior {
        alpha: r.alt.alpha,
        tau: r.alt.tau,
        sigma: config::matrix(&r.alt.sigma, "regress.alt.sigma")?,
        lambda: r.alt.lambda.unwrap_or(f64::INFINITY),
    };
    let v = closedform::regression_compose(design, &base, &alt).map_err(|e| match e {
        Error::Domain(m) => Error::config("regress", m),
        other => other,
    })?;
    writeln!(out, "variance={} coefficients={}", kebab(&v.variance), kebab(&v.coefficients))?;
    write_json(cfg, c, v)
}

fn kebab<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|j| j.as_str().map(str::to_owned)).unwrap_or_default()
}

impl From<std::fmt::Error> for Error {
    fn from(e: std::fmt::Error) -> Self {
        Error::Io(std::io::Error::other(e))
    }
}
