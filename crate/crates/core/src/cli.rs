//! Command-line front end: argument types, the command pipelines and their
//! JSON / CSV renderings.

use crate::error::{Error, Result};
use crate::gls::{gls_fit, scale_std_error, tail_estimate, GlsFit};
use crate::hill::{hill_estimate, hill_plot};
use crate::inference::{
    asymptotic_ci, permutation_bootstrap, CiMethod, ConfidenceReport, DEFAULT_LEVEL, DEFAULT_REPLICATES,
};
use crate::io::read_series;
use crate::models::DistributionSpec;
use crate::psi::{builtin_psi, psi_table_mc, Provenance, PsiTable};
use crate::select::{normal_upper_quantile, select_j1_below, SelectionTrace, DEFAULT_BACK_START, DEFAULT_P};
use crate::spectrum::{compute_spectrum, MaxSpectrum};
use crate::stream::{SeededStream, DEFAULT_SEED};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::fmt::Write as _;
use std::path::PathBuf;

/// Environment variable naming a ψ table CSV used instead of the builtin one.
pub const PSI_TABLE_ENV: &str = "MAXSPEC_PSI_TABLE";

#[derive(Debug, Parser)]
#[command(name = "maxspec", version, about = "Heavy-tail exponent estimation from the dyadic max-spectrum")]
pub struct Cli {
    /// Worker threads for Monte Carlo and bootstrap work (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output format; json by default, csv for simulate and psi-table.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum, automatic j1, GLS fit, tail estimate and asymptotic interval.
    Estimate(EstimateArgs),
    /// Hill estimator at one k, or the whole Hill plot.
    Hill(HillArgs),
    /// Draw a seeded sample from a distribution model.
    Simulate(SimulateArgs),
    /// Regenerate the ψ table by Monte Carlo.
    PsiTable(PsiTableArgs),
    /// Permutation-bootstrap interval for H and α.
    Bootstrap(BootstrapArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Data file: one value per line or delimited columns.
    #[arg(long)]
    pub input: PathBuf,
    /// Column to read from multi-column input (header name or 1-based index).
    #[arg(long)]
    pub column: Option<String>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Lower scale; chosen automatically when absent.
    #[arg(long)]
    pub j1: Option<usize>,
    /// Upper scale; defaults to the largest scale.
    #[arg(long)]
    pub j2: Option<usize>,
    /// Significance level of the j1 selection test.
    #[arg(long, default_value_t = DEFAULT_P)]
    pub p: f64,
    /// Number of top scales the j1 selection starts from.
    #[arg(long, default_value_t = DEFAULT_BACK_START)]
    pub b: usize,
    /// Confidence level.
    #[arg(long, default_value_t = DEFAULT_LEVEL)]
    pub level: f64,
    /// ψ table CSV (lag,psi); the builtin table is used when absent.
    #[arg(long, env = PSI_TABLE_ENV)]
    pub psi_table: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub fit: FitArgs,
}

#[derive(Debug, Args)]
pub struct BootstrapArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub fit: FitArgs,
    /// Number of permutation replicates M.
    #[arg(long, default_value_t = DEFAULT_REPLICATES)]
    pub replicates: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
}

#[derive(Debug, Args)]
pub struct HillArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Number of upper order statistics; the full plot is emitted when absent.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Model and parameters, e.g. `frechet:alpha=1.5` or `pareto:alpha=1,sigma0=2`.
    #[arg(long)]
    pub dist: String,
    /// Sample size.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
}

#[derive(Debug, Args)]
pub struct PsiTableArgs {
    /// Largest lag in the table.
    #[arg(long, default_value_t = 19)]
    pub max_lag: usize,
    /// Pairs per bag.
    #[arg(long, default_value_t = 1_000_000)]
    pub pairs: usize,
    #[arg(long, default_value_t = 100)]
    pub bags: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
}

/// A failed run: the error plus whatever was computed before it.
#[derive(Debug)]
pub struct Failure {
    pub error: Error,
    pub partial: Option<Value>,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { error, partial: None }
    }
}

impl Failure {
    /// `{"error": {"kind", "message"}, "partial": …}`.
    pub fn to_json(&self) -> Value {
        let mut obj = json!({ "error": { "kind": self.error.kind(), "message": self.error.to_string() } });
        if let Some(p) = &self.partial {
            obj["partial"] = p.clone();
        }
        obj
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectrumPoint {
    pub j: usize,
    pub nj: usize,
    pub y: Option<f64>,
    /// Half-width of the interval for `E Y_j` at the requested level.
    pub errorbar: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EstimateReport {
    pub n: usize,
    pub j_max: usize,
    pub j_min_valid: usize,
    pub spectrum: Vec<SpectrumPoint>,
    pub j1: usize,
    pub j2: usize,
    pub alpha: f64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub sigma0: f64,
    #[serde(rename = "seH")]
    pub se_h: f64,
    pub cw: f64,
    pub ci: ConfidenceReport,
    pub trace: Option<SelectionTrace>,
    pub psi: Provenance,
}

fn load_psi(path: Option<&PathBuf>) -> Result<PsiTable> {
    match path {
        None => Ok(builtin_psi()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Input(format!("cannot read psi table {}: {e}", p.display())))?;
            PsiTable::from_csv(&text)
        }
    }
}

/// Fixed or automatically selected `(j1, j2)` plus the GLS fit on it.
fn fit_range(spec: &MaxSpectrum, args: &FitArgs, psi: &PsiTable) -> Result<(GlsFit, Option<SelectionTrace>)> {
    let j2 = args.j2.unwrap_or(spec.j_max);
    match args.j1 {
        Some(j1) => Ok((gls_fit(spec, j1, j2, psi)?, None)),
        None => {
            let trace = select_j1_below(spec, j2, args.p, args.b, psi)?;
            Ok((trace.final_fit.clone(), Some(trace)))
        }
    }
}

fn spectrum_points(spec: &MaxSpectrum, h: f64, level: f64, psi: &PsiTable) -> Result<Vec<SpectrumPoint>> {
    let z = normal_upper_quantile((1.0 - level) / 2.0)?;
    Ok((1..=spec.j_max)
        .map(|j| {
            let y = spec.y(j);
            SpectrumPoint { j, nj: spec.n_j(j), y, errorbar: y.map(|_| z * scale_std_error(h, psi, spec.n_j(j))) }
        })
        .collect())
}

pub fn estimate(data: &[f64], args: &FitArgs, psi: &PsiTable) -> std::result::Result<EstimateReport, Failure> {
    let spec = compute_spectrum(data)?;
    let (fit, trace) = fit_range(&spec, args, psi)?;
    let point = tail_estimate(&fit).map_err(|error| Failure {
        error,
        partial: Some(json!({ "n": spec.n, "j1": fit.j1, "j2": fit.j2, "H": fit.h, "C": fit.c })),
    })?;
    let ci = asymptotic_ci(&fit, args.level)?;
    Ok(EstimateReport {
        n: spec.n,
        j_max: spec.j_max,
        j_min_valid: spec.j_min_valid,
        spectrum: spectrum_points(&spec, fit.h, args.level, psi)?,
        j1: fit.j1,
        j2: fit.j2,
        alpha: point.alpha,
        h: fit.h,
        c: fit.c,
        sigma0: point.sigma0,
        se_h: fit.se_h,
        cw: fit.cw,
        ci,
        trace,
        psi: psi.provenance().clone(),
    })
}

pub fn bootstrap(data: &[f64], args: &BootstrapArgs, psi: &PsiTable) -> Result<ConfidenceReport> {
    let spec = compute_spectrum(data)?;
    let (fit, _) = fit_range(&spec, &args.fit, psi)?;
    let stream = SeededStream::new(args.seed, args.stream);
    permutation_bootstrap(data, fit.j1, fit.j2, args.replicates, args.fit.level, stream, psi)
}

/// Parses `name:key=value,key=value` into a model, filling the documented
/// defaults (`sigma0 = 1`; mixture `p_frechet = 0.1`, `exp_mean = 5`; stable
/// `beta = 0`, `scale = 1`).
pub fn parse_dist(text: &str) -> Result<DistributionSpec> {
    let (name, params) = text.split_once(':').unwrap_or((text, ""));
    let model = name.trim().replace('-', "_");
    let mut map = Map::new();
    map.insert("model".into(), Value::String(model.clone()));
    for pair in params.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::Parameter(format!("expected key=value in --dist, got {pair:?}")))?;
        let v: f64 =
            v.trim().parse().map_err(|_| Error::Parameter(format!("--dist parameter {k} is not a number: {v:?}")))?;
        map.insert(k.trim().to_string(), json!(v));
    }
    let defaults: &[(&str, f64)] = match model.as_str() {
        "pareto" | "frechet" => &[("sigma0", 1.0)],
        "pareto_mixture" | "frechet_max_product" => &[("sigma0", 1.0), ("sigma1", 1.0)],
        "exp_frechet_mixture" => &[("p_frechet", 0.1), ("sigma0", 1.0), ("exp_mean", 5.0)],
        "stable" => &[("beta", 0.0), ("scale", 1.0)],
        _ => &[],
    };
    for (k, v) in defaults {
        map.entry(k.to_string()).or_insert(json!(v));
    }
    let spec: DistributionSpec = serde_json::from_value(Value::Object(map))
        .map_err(|e| Error::Parameter(format!("invalid --dist {text:?}: {e}")))?;
    spec.validate()?;
    Ok(spec)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn ci_csv_row(ci: &ConfidenceReport) -> String {
    let (a_low, a_high) = match ci.alpha_interval {
        Some(a) => (Some(a.low), Some(a.high)),
        None => (None, None),
    };
    format!("{},{},{},{},{},{}", ci.level, ci.h_hat, ci.h_interval.0, ci.h_interval.1, opt(a_low), opt(a_high))
}

/// Summary as `# key=value` lines, then `j,nj,y,errorbar` rows.
pub fn estimate_csv(r: &EstimateReport) -> String {
    let mut s = String::new();
    for (k, v) in [
        ("n", r.n as f64),
        ("j1", r.j1 as f64),
        ("j2", r.j2 as f64),
        ("alpha", r.alpha),
        ("H", r.h),
        ("C", r.c),
        ("sigma0", r.sigma0),
        ("seH", r.se_h),
        ("cw", r.cw),
    ] {
        writeln!(s, "# {k}={v}").unwrap();
    }
    writeln!(s, "# level,H,H_low,H_high,alpha_low,alpha_high").unwrap();
    writeln!(s, "# {}", ci_csv_row(&r.ci)).unwrap();
    s.push_str("j,nj,y,errorbar\n");
    for p in &r.spectrum {
        writeln!(s, "{},{},{},{}", p.j, p.nj, opt(p.y), opt(p.errorbar)).unwrap();
    }
    s
}

/// One header line and one row.
pub fn bootstrap_csv(r: &ConfidenceReport) -> String {
    let (m, seed, stream, dropped) = match r.method {
        CiMethod::Permutation { replicates, seed, stream, dropped } => (replicates, seed, stream, dropped),
        CiMethod::Asymptotic => (0, 0, 0, 0),
    };
    format!(
        "level,H,H_low,H_high,alpha_low,alpha_high,replicates,seed,stream,dropped\n{},{m},{seed},{stream},{dropped}\n",
        ci_csv_row(r)
    )
}

/// Runs one command and returns the rendered report.
pub fn execute(cli: &Cli) -> std::result::Result<String, Failure> {
    let format = cli.format;
    match &cli.command {
        Command::Estimate(args) => {
            let data = read_series(&args.input.input, args.input.column.as_deref())?;
            let psi = load_psi(args.fit.psi_table.as_ref())?;
            let report = estimate(&data, &args.fit, &psi)?;
            Ok(match format.unwrap_or(Format::Json) {
                Format::Json => to_json(&report),
                Format::Csv => estimate_csv(&report),
            })
        }
        Command::Bootstrap(args) => {
            let data = read_series(&args.input.input, args.input.column.as_deref())?;
            let psi = load_psi(args.fit.psi_table.as_ref())?;
            let report = bootstrap(&data, args, &psi)?;
            Ok(match format.unwrap_or(Format::Json) {
                Format::Json => to_json(&report),
                Format::Csv => bootstrap_csv(&report),
            })
        }
        Command::Hill(args) => {
            let data = read_series(&args.input.input, args.input.column.as_deref())?;
            let series = match args.k {
                Some(k) => vec![(k, hill_estimate(&data, k)?)],
                None => hill_plot(&data)?,
            };
            Ok(match format.unwrap_or(Format::Json) {
                Format::Json => {
                    let rows: Vec<Value> = series.iter().map(|(k, a)| json!({ "k": k, "alpha": a })).collect();
                    to_json(&json!({ "n": data.len(), "hill": rows }))
                }
                Format::Csv => {
                    let mut s = String::from("k,alpha\n");
                    for (k, a) in &series {
                        writeln!(s, "{k},{a}").unwrap();
                    }
                    s
                }
            })
        }
        Command::Simulate(args) => {
            let dist = parse_dist(&args.dist)?;
            let stream = SeededStream::new(args.seed, args.stream);
            let values = dist.sample(args.n, stream)?;
            Ok(match format.unwrap_or(Format::Csv) {
                Format::Json => {
                    to_json(&json!({ "dist": dist, "seed": args.seed, "stream": args.stream, "values": values }))
                }
                Format::Csv => {
                    let mut s = format!(
                        "# {}\n# seed={} stream={} n={}\n",
                        serde_json::to_string(&dist).expect("spec serializes"),
                        args.seed,
                        args.stream,
                        args.n
                    );
                    for v in &values {
                        writeln!(s, "{v}").unwrap();
                    }
                    s
                }
            })
        }
        Command::PsiTable(args) => {
            let table = psi_table_mc(args.max_lag, args.pairs, args.bags, SeededStream::new(args.seed, args.stream))?;
            Ok(match format.unwrap_or(Format::Csv) {
                Format::Json => to_json(&json!({ "psi": table.values(), "provenance": table.provenance() })),
                Format::Csv => table.to_csv(),
            })
        }
    }
}

/// [`execute`] inside a worker pool of `--threads` threads, then writes the
/// report to `--output` or returns it for standard output.
pub fn run(cli: &Cli) -> std::result::Result<Option<String>, Failure> {
    let rendered = match cli.threads {
        Some(0) => return Err(Error::Parameter("--threads must be at least 1".into()).into()),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Parameter(format!("cannot start {t} threads: {e}")))?
            .install(|| execute(cli))?,
        None => execute(cli)?,
    };
    match &cli.output {
        Some(path) => {
            std::fs::write(path, rendered).map_err(Error::from)?;
            Ok(None)
        }
        None => Ok(Some(rendered)),
    }
}
