//! The `gibbs` command line: abundance ingestion, model selection and one
//! JSON object per run (CSV for `plot`).
//!
//! Exit codes: 0 success, 2 usage error, 3 numeric or guard violation,
//! 4 I/O or input-data error.

mod abundance;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

pub use abundance::{parse_abundance, AbundanceError};

use crate::conditional::{self as cond, ObservedSample};
use crate::error::Error;
use crate::estimators;
use crate::models::{CachedWeights, GibbsModel, PitmanYor, WeightTable};
use crate::numeric::take_diagnostics;
use crate::oracle;
use crate::polya;
use crate::samplers::{replicate, sample_conditional, sample_partition};
use crate::stirling;
use crate::unconditional as uncond;
use crate::verify::{self, VerifyReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Data {
        path: PathBuf,
        #[source]
        source: AbundanceError,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Data { .. } => 4,
            CliError::Model(e) => match e {
                Error::IndexOutOfRange(_)
                | Error::InvalidComposition(_)
                | Error::InvalidCounts(_)
                | Error::InvalidSample(_)
                | Error::Constraint(_) => 2,
                Error::InvalidWeights(_) => 4,
                _ => 3,
            },
        }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

#[derive(Debug, Parser)]
#[command(
    name = "gibbs",
    version,
    about = "Exact laws, moments, simulation and predictive estimators for Gibbs partitions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generalized Stirling number S(n, k; α), non-central with --gamma
    Stirling(StirlingArgs),
    /// Probability mass functions of block statistics
    #[command(subcommand)]
    Pmf(PmfCommand),
    /// Joint falling factorial moments of block counts
    Moments(MomentsArgs),
    /// Estimators for the species of observation n+m+1
    #[command(subcommand)]
    Predict(PredictCommand),
    /// Posterior laws given an observed sample
    #[command(subcommand)]
    Posterior(PosteriorCommand),
    /// Probability that the next observation is a new species
    Discovery(DiscoveryArgs),
    /// Monte Carlo summaries from the sequential sampler
    Sample(SampleArgs),
    /// Compare every closed form with exhaustive enumeration
    Verify(VerifyArgs),
    /// Emit a probability table as CSV
    Plot(PlotArgs),
}

#[derive(Debug, Subcommand)]
pub enum PmfCommand {
    /// Number of blocks K_n
    Kn(KnArgs),
    /// Number of blocks of size l, C_{l,n}
    Cl(ClArgs),
}

#[derive(Debug, Subcommand)]
pub enum PredictCommand {
    /// Observation n+m+1 hits a new species seen l times
    NewL(PredictArgs),
    /// Observation n+m+1 hits an old species seen l times
    OldL(PredictArgs),
}

#[derive(Debug, Subcommand)]
pub enum PosteriorCommand {
    /// Number of new species K_m among m further observations
    Km(PosteriorArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// Pitman-Yor family (--alpha, --theta)
    Py,
    /// Tabulated weights (--weights)
    Table,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ModelArgs {
    /// Model family; inferred from the other flags when omitted
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelKind>,
    /// Discount α < 1
    #[arg(long, allow_negative_numbers = true, conflicts_with = "weights")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Concentration θ (for α < 0, a multiple of |α|)
    #[arg(long, allow_negative_numbers = true, conflicts_with = "weights")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    /// JSON weight table {"alpha": .., "maxN": N, "rows": [[V_{1,1}], [V_{2,1}, V_{2,2}], ..]}
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct StirlingArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct KnArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ClArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub l: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentKind {
    /// C_{l,n}, blocks of an unconditional sample of size n
    Blocks,
    /// W_{l,m}, new blocks among m further observations
    New,
    /// O_{l,m}, old blocks after m further observations
    Old,
    /// Z_{l,m}, old and new blocks together (single l)
    All,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct MomentsArgs {
    /// Orders r_1,r_2,... of the factorial moment E[Π_l (X_l)_{[r_l]}]
    #[arg(long, value_delimiter = ',', required = true)]
    pub orders: Vec<usize>,
    #[arg(long, value_enum, default_value_t = MomentKind::Blocks)]
    pub kind: MomentKind,
    /// Sample size (blocks)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Abundance file (new, old, all)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<PathBuf>,
    /// Additional sample size (new, old, all)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct PredictArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub m: usize,
    /// Abundance l; every admissible l when omitted
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct PosteriorArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub m: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct DiscoveryArgs {
    #[arg(long)]
    pub data: PathBuf,
    /// Predict observation n+m+1 instead of n+1
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct SampleArgs {
    /// Sample size for unconditional runs
    #[arg(long, required_unless_present = "cond")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Abundance file to continue from
    #[arg(long, requires = "m")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cond: Option<PathBuf>,
    /// Additional observations after the conditioning sample
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct VerifyArgs {
    /// Sample size; with --m, every observed sample of this size
    #[arg(long)]
    pub n: usize,
    /// Additional observations for the conditional checks
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Single observed sample for the conditional checks
    #[arg(long, requires = "m")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<PathBuf>,
    #[arg(long, default_value_t = verify::TOLERANCE)]
    pub tolerance: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlotKind {
    Kn,
    Cl,
    Km,
    W,
    O,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct PlotArgs {
    #[arg(value_enum)]
    pub what: PlotKind,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
}

/// What a successful command prints.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Json(Value),
    Csv(String),
}

impl std::fmt::Display for Output {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Output::Json(v) => write!(f, "{}", serde_json::to_string_pretty(v).map_err(|_| std::fmt::Error)?),
            Output::Csv(s) => f.write_str(s.trim_end()),
        }
    }
}

/// Decimal string with 15 significant digits.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.14e}")
    }
}

fn num(x: f64) -> Value {
    Value::String(format_number(x))
}

fn indexed<T: Copy>(values: impl IntoIterator<Item = (usize, T)>, f: impl Fn(T) -> Value) -> Value {
    Value::Object(values.into_iter().map(|(i, v)| (i.to_string(), f(v))).collect())
}

fn build_model(args: &ModelArgs) -> Result<Box<dyn GibbsModel>, CliError> {
    let kind = match (args.model, &args.weights, args.alpha) {
        (Some(kind), _, _) => kind,
        (None, Some(_), _) => ModelKind::Table,
        (None, None, Some(_)) => ModelKind::Py,
        (None, None, None) => return Err(usage("select a model with --alpha/--theta or --weights")),
    };
    match kind {
        ModelKind::Py => {
            let (Some(alpha), Some(theta)) = (args.alpha, args.theta) else {
                return Err(usage("--model py needs both --alpha and --theta"));
            };
            if args.weights.is_some() {
                return Err(usage("--weights cannot be combined with --model py"));
            }
            Ok(Box::new(PitmanYor::new(alpha, theta)?))
        }
        ModelKind::Table => {
            let Some(path) = &args.weights else {
                return Err(usage("--model table needs --weights"));
            };
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            Ok(Box::new(WeightTable::from_json(&text)?))
        }
    }
}

fn load_sample(path: &Path) -> Result<ObservedSample, CliError> {
    let file = File::open(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_abundance(BufReader::new(file)).map_err(|source| CliError::Data {
        path: path.to_path_buf(),
        source,
    })
}

fn need<T: Copy>(value: Option<T>, flag: &str, context: &str) -> Result<T, CliError> {
    value.ok_or_else(|| usage(format!("{context} requires --{flag}")))
}

fn need_path<'a>(value: &'a Option<PathBuf>, flag: &str, context: &str) -> Result<&'a Path, CliError> {
    value
        .as_deref()
        .ok_or_else(|| usage(format!("{context} requires --{flag}")))
}

/// Parses `argv` (including the program name) and runs the command.
pub fn execute<I, T>(argv: I) -> Result<Output, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| usage(e.to_string()))?;
    run(cli.command)
}

fn envelope<P: Serialize>(command: &str, params: &P, results: Value) -> Result<Output, CliError> {
    let diagnostics = take_diagnostics();
    let params = serde_json::to_value(params).map_err(|e| usage(e.to_string()))?;
    Ok(Output::Json(json!({
        "command": command,
        "params": params,
        "results": results,
        "diagnostics": {
            "clamps": diagnostics.clamps,
            "warnings": diagnostics.warnings,
        },
    })))
}

pub fn run(command: Command) -> Result<Output, CliError> {
    take_diagnostics();
    match command {
        Command::Stirling(a) => {
            let value = match a.gamma {
                Some(g) => stirling::noncentral_stirling(a.n, a.k, a.alpha, g)?,
                None => stirling::central_stirling(a.n, a.k, a.alpha)?,
            };
            let results = json!({
                "value": num(value.to_f64()),
                "ln_abs": num(value.ln_abs()),
                "sign": value.sign(),
            });
            envelope("stirling", &a, results)
        }
        Command::Pmf(PmfCommand::Kn(a)) => {
            let model = build_model(&a.model)?;
            let pmf = uncond::kn_pmf(&model, a.n)?;
            envelope("pmf kn", &a, indexed(pmf.into_iter().enumerate().skip(1), num))
        }
        Command::Pmf(PmfCommand::Cl(a)) => {
            let model = build_model(&a.model)?;
            let pmf = uncond::cl_pmf(&model, a.n, a.l)?;
            envelope("pmf cl", &a, indexed(pmf.into_iter().enumerate(), num))
        }
        Command::Moments(a) => {
            let model = build_model(&a.model)?;
            let value = match a.kind {
                MomentKind::Blocks => {
                    let n = need(a.n, "n", "moments --kind blocks")?;
                    uncond::joint_factorial_moments(&model, n, &a.orders)?
                }
                kind => {
                    let sample = load_sample(need_path(&a.data, "data", "conditional moments")?)?;
                    let m = need(a.m, "m", "conditional moments")?;
                    match kind {
                        MomentKind::New => cond::w_joint_factorial_moments(&model, &sample, m, &a.orders)?,
                        MomentKind::Old => polya::o_joint_factorial_moments(&model, &sample, m, &a.orders)?,
                        _ => {
                            let nonzero: Vec<(usize, usize)> = a
                                .orders
                                .iter()
                                .enumerate()
                                .filter(|(_, &r)| r > 0)
                                .map(|(i, &r)| (i + 1, r))
                                .collect();
                            match nonzero[..] {
                                [] => 1.0,
                                [(l, r)] => polya::z_factorial_moment(&model, &sample, m, l, r)?,
                                _ => return Err(usage("--kind all takes a single nonzero order")),
                            }
                        }
                    }
                }
            };
            envelope("moments", &a, json!({ "factorial_moment": num(value) }))
        }
        Command::Predict(PredictCommand::NewL(a)) => {
            let model = build_model(&a.model)?;
            let sample = load_sample(&a.data)?;
            let ls: Vec<usize> = a.l.map_or_else(|| (1..=a.m).collect(), |l| vec![l]);
            let mut out = BTreeMap::new();
            for l in ls {
                out.insert(l, estimators::estimate_new_l(&model, &sample, a.m, l)?);
            }
            envelope("predict new-l", &a, indexed(out, num))
        }
        Command::Predict(PredictCommand::OldL(a)) => {
            let model = build_model(&a.model)?;
            let sample = load_sample(&a.data)?;
            let ls: Vec<usize> = a.l.map_or_else(|| (1..=sample.n() + a.m).collect(), |l| vec![l]);
            let mut out = BTreeMap::new();
            for l in ls {
                out.insert(l, estimators::estimate_old_l(&model, &sample, a.m, l)?);
            }
            envelope("predict old-l", &a, indexed(out, num))
        }
        Command::Posterior(PosteriorCommand::Km(a)) => {
            let model = build_model(&a.model)?;
            let sample = load_sample(&a.data)?;
            let pmf = cond::new_blocks_pmf(&model, &sample, a.m)?;
            let mean = cond::new_blocks_mean(&model, &sample, a.m)?;
            let results = json!({ "pmf": indexed(pmf.into_iter().enumerate(), num), "mean": num(mean) });
            envelope("posterior km", &a, results)
        }
        Command::Discovery(a) => {
            let model = build_model(&a.model)?;
            let sample = load_sample(&a.data)?;
            let p = if a.m == 0 {
                estimators::discovery_probability(&model, &sample)?
            } else {
                estimators::m_step_discovery(&model, &sample, a.m)?
            };
            envelope("discovery", &a, json!({ "p_new": num(p) }))
        }
        Command::Sample(a) => run_sample(&a),
        Command::Verify(a) => run_verify(&a),
        Command::Plot(a) => run_plot(&a),
    }
}

fn empirical_pmf(values: &[usize], len: usize) -> Vec<f64> {
    let mut pmf = vec![0.0; len];
    for &v in values {
        pmf[v] += 1.0;
    }
    pmf.iter_mut().for_each(|p| *p /= values.len().max(1) as f64);
    pmf
}

fn run_sample(a: &SampleArgs) -> Result<Output, CliError> {
    let model = build_model(&a.model)?;
    if a.reps == 0 {
        return Err(usage("--reps must be positive"));
    }
    let results = match &a.cond {
        None => {
            let n = need(a.n, "n", "sample")?;
            let cached = CachedWeights::new(&model, n + 1)?;
            let draws = replicate(a.reps, a.seed, |rng| {
                Ok(sample_partition(&cached, n, rng)?.sizes().to_vec())
            })?;
            let ks: Vec<usize> = draws.iter().map(Vec::len).collect();
            let mut cl_mean = BTreeMap::new();
            for l in 1..=n {
                let total: usize = draws.iter().map(|d| d.iter().filter(|&&s| s == l).count()).sum();
                cl_mean.insert(l, total as f64 / a.reps as f64);
            }
            json!({
                "reps": a.reps,
                "kn_pmf": indexed(empirical_pmf(&ks, n + 1).into_iter().enumerate().skip(1), num),
                "kn_mean": num(ks.iter().sum::<usize>() as f64 / a.reps as f64),
                "cl_mean": indexed(cl_mean, num),
            })
        }
        Some(path) => {
            let sample = load_sample(path)?;
            let m = need(a.m, "m", "sample --cond")?;
            let cached = CachedWeights::new(&model, sample.n() + m + 1)?;
            let draws = replicate(a.reps, a.seed, |rng| sample_conditional(&cached, &sample, m, rng))?;
            let ks: Vec<usize> = draws.iter().map(|d| d.k()).collect();
            let mut w_mean = BTreeMap::new();
            for l in 1..=m {
                let total: usize = draws.iter().map(|d| d.new_of_size(l)).sum();
                w_mean.insert(l, total as f64 / a.reps as f64);
            }
            let mut o_mean = BTreeMap::new();
            for l in 1..=sample.n() + m {
                let total: usize = draws.iter().map(|d| d.old_of_size(&sample, l)).sum();
                o_mean.insert(l, total as f64 / a.reps as f64);
            }
            json!({
                "reps": a.reps,
                "km_pmf": indexed(empirical_pmf(&ks, m + 1).into_iter().enumerate(), num),
                "km_mean": num(ks.iter().sum::<usize>() as f64 / a.reps as f64),
                "w_mean": indexed(w_mean, num),
                "o_mean": indexed(o_mean, num),
            })
        }
    };
    envelope("sample", a, results)
}

fn report_json(report: &VerifyReport, tolerance: f64) -> Value {
    let checks: Map<String, Value> = report
        .checks()
        .map(|c| {
            (
                c.name.clone(),
                json!({ "max_deviation": num(c.max_deviation), "comparisons": c.comparisons }),
            )
        })
        .collect();
    json!({
        "max_deviation": num(report.max_deviation()),
        "comparisons": report.comparisons(),
        "passed": report.passed(tolerance),
        "checks": checks,
    })
}

fn run_verify(a: &VerifyArgs) -> Result<Output, CliError> {
    let model = build_model(&a.model)?;
    let guard = oracle::max_n_guard();
    let total = a.n + a.m.unwrap_or(0);
    if total > guard {
        return Err(Error::OracleGuard { n: total, guard }.into());
    }
    let mut report = verify::verify_unconditional(&model, a.n)?;
    if let Some(m) = a.m {
        report.merge(match &a.data {
            Some(path) => verify::verify_conditional(&model, &load_sample(path)?, m)?,
            None => verify::verify_conditional_all(&model, a.n, m)?,
        });
    }
    envelope("verify", a, report_json(&report, a.tolerance))
}

fn run_plot(a: &PlotArgs) -> Result<Output, CliError> {
    let model = build_model(&a.model)?;
    let (header, rows): (&str, Vec<f64>) = match a.what {
        PlotKind::Kn => ("k", uncond::kn_pmf(&model, need(a.n, "n", "plot kn")?)?),
        PlotKind::Cl => (
            "x",
            uncond::cl_pmf(&model, need(a.n, "n", "plot cl")?, need(a.l, "l", "plot cl")?)?,
        ),
        kind => {
            let sample = load_sample(need_path(&a.data, "data", "conditional plots")?)?;
            let m = need(a.m, "m", "conditional plots")?;
            match kind {
                PlotKind::Km => ("k", cond::new_blocks_pmf(&model, &sample, m)?),
                PlotKind::W => ("x", cond::w_pmf(&model, &sample, m, need(a.l, "l", "plot w")?)?),
                _ => ("y", polya::o_pmf(&model, &sample, m, need(a.l, "l", "plot o")?)?),
            }
        }
    };
    // K_n has no mass at zero.
    let first = usize::from(matches!(a.what, PlotKind::Kn));
    let mut out = format!("{header},probability\n");
    for (i, p) in rows.iter().enumerate().skip(first) {
        out.push_str(&format!("{i},{}\n", format_number(*p)));
    }
    take_diagnostics();
    Ok(Output::Csv(out))
}

/// Rebuilds an argument vector from a JSON envelope printed by [`execute`].
pub fn replay_argv(output: &Value) -> Option<Vec<String>> {
    let mut argv = vec!["gibbs".to_string()];
    argv.extend(output.get("command")?.as_str()?.split(' ').map(str::to_string));
    for (key, value) in output.get("params")?.as_object()? {
        argv.push(format!("--{key}"));
        argv.push(match value {
            Value::String(s) => s.clone(),
            Value::Array(items) => items.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
            other => other.to_string(),
        });
    }
    Some(argv)
}

/// Entry point for the binary: prints the output or the error and returns
/// the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(output) => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{output}") {
                Ok(()) => 0,
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
                Err(e) => {
                    eprintln!("error: {e}");
                    4
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
