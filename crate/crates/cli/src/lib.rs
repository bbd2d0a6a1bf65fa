//! Configuration and dispatch for the `smoothcond` command-line tool.
//!
//! A [`RunConfig`] fully determines a run's output: it is embedded in every
//! report, and [`run`] on the embedded config reproduces the report byte for
//! byte. Execution details that cannot change results (thread count, output
//! path) are deliberately left out of it.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use smoothcond::bounds::{self, BoundContext, LambdaMode};
use smoothcond::cg::cg_experiment;
use smoothcond::experiments::{
    estimate_q, expectation_from_records, make_ones_center, reproduce_tables, run_trials,
    tail_from_records, theorem_tail_suite, verify_inequality_suite, write_trials_csv, CenterScale, ExperimentReport,
    QMethod, Statistic, TableRatio, Verdict,
};
use smoothcond::sampling::{GaussianEnsemble, Seed};
use smoothcond::svd::spectral_norm;
use smoothcond::Matrix;

/// Default master seed when neither `--seed` nor the environment sets one.
pub const DEFAULT_SEED: u64 = 42;
pub const SEED_ENV: &str = "SMOOTHCOND_SEED";

/// Why a run did not produce a passing report.
#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration; nothing was sampled.
    Config(String),
    /// Failure while running or writing output.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Runtime(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Config(m) => write!(f, "configuration error: {m}"),
            Self::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

fn config_err(e: impl fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

fn runtime_err(e: impl fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Maps library errors raised while validating inputs to config errors and
/// everything else to runtime errors.
fn lib_err(e: smoothcond::Error) -> CliError {
    use smoothcond::Error as E;
    match e {
        E::Dimension(_) | E::Domain { .. } | E::BelowThreshold { .. } | E::Parse(_) | E::NonFinite { .. } => {
            config_err(e)
        }
        other => runtime_err(other),
    }
}

/// Report serialization format.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Center of the Gaussian ensemble.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Center {
    Zero,
    /// `ones(m, n) / √(mn)`.
    OnesUnit,
    /// `√m · ones(m, n) / √(mn)`.
    OnesSqrtM,
    /// A CSV matrix.
    File(PathBuf),
}

impl FromStr for Center {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "zero" => Ok(Self::Zero),
            "ones-unit" => Ok(Self::OnesUnit),
            "ones-sqrt-m" => Ok(Self::OnesSqrtM),
            _ => match s.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(Self::File(PathBuf::from(p))),
                _ => Err(format!(
                    "unknown center {s:?} (expected zero, ones-unit, ones-sqrt-m or file:<path>)"
                )),
            },
        }
    }
}

impl fmt::Display for Center {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => f.write_str("zero"),
            Self::OnesUnit => f.write_str("ones-unit"),
            Self::OnesSqrtM => f.write_str("ones-sqrt-m"),
            Self::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl TryFrom<String> for Center {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<Center> for String {
    fn from(c: Center) -> String {
        c.to_string()
    }
}

impl Center {
    fn build(&self, m: usize, n: usize) -> Result<Matrix, CliError> {
        match self {
            Self::Zero => Ok(Matrix::zeros(m, n)),
            Self::OnesUnit => Ok(make_ones_center(m, n, CenterScale::UnitNorm)),
            Self::OnesSqrtM => Ok(make_ones_center(m, n, CenterScale::SqrtM)),
            Self::File(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| config_err(format!("cannot read center {}: {e}", p.display())))?;
                let c = Matrix::from_csv(&text).map_err(|e| config_err(format!("{}: {e}", p.display())))?;
                if c.shape() != (m, n) {
                    return Err(config_err(format!(
                        "center {} is {}x{}, expected {m}x{n}",
                        p.display(),
                        c.rows(),
                        c.cols()
                    )));
                }
                Ok(c)
            }
        }
    }
}

/// `N(center, σ² I)` over `m × n` matrices.
#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// zero, ones-unit, ones-sqrt-m or file:<path>
    #[arg(long, default_value = "zero")]
    pub center: Center,
}

impl EnsembleArgs {
    fn ensemble(&self) -> Result<GaussianEnsemble, CliError> {
        if self.m == 0 || self.n == 0 {
            return Err(config_err(format!("m and n must be positive, got {}x{}", self.m, self.n)));
        }
        let c = self.center.build(self.m, self.n)?;
        GaussianEnsemble::new(c, self.sigma).map_err(lib_err)
    }
}

#[derive(Args, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedArgs {
    /// Master seed (also read from SMOOTHCOND_SEED).
    #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

impl SeedArgs {
    fn seed(&self) -> Seed {
        Seed::new(self.seed, 0)
    }
}

/// Closed-form evaluators exposed by `bounds-eval`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum BoundOp {
    CLambda,
    Zeta,
    ZOfEps,
    TheoremTailBound,
    PinvTailBound,
    PinvDirectionalTailBound,
    ChenDongarraBounds,
    EdelmanLimit,
    QLimit,
    QAnalyticBounds,
    ExpectationBound,
    LnExpectationBound,
    MuCdw,
    LopBound,
    CgIterationBound,
    CgCostAndBreakeven,
}

impl BoundOp {
    fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsEvalArgs {
    #[arg(long)]
    pub op: BoundOp,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long = "lambda-mode", default_value = "theorem")]
    pub lambda_mode: LambdaModeArg,
    /// Value of Q(m, n).
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub z: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub xi: Option<f64>,
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    /// Additive constant of the loss-of-precision bound.
    #[arg(long)]
    pub offset: Option<f64>,
    /// Lower-order term of the CG cost.
    #[arg(long = "lower-order")]
    pub lower_order: Option<f64>,
}

/// `λ` convention flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum LambdaModeArg {
    Theorem,
    Asymptotic,
}

impl From<LambdaModeArg> for LambdaMode {
    fn from(a: LambdaModeArg) -> Self {
        match a {
            LambdaModeArg::Theorem => LambdaMode::Theorem,
            LambdaModeArg::Asymptotic => LambdaMode::Asymptotic,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Dense,
    Bidiagonal,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateQArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArgs,
    #[arg(long, default_value = "dense")]
    pub method: MethodArg,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArgs,
    /// Explicit κ thresholds, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub thresholds: Vec<f64>,
    /// Also check the smoothed tail theorem on this many log-spaced z values
    /// from ζ to 50ζ.
    #[arg(long = "z-grid")]
    pub z_grid: Option<usize>,
    /// Q(m, n) for the theorem check; estimated from 2000 draws when absent.
    #[arg(long)]
    pub q: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum StatisticArg {
    Kappa,
    LnKappa,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArgs,
    #[arg(long, default_value = "ln_kappa")]
    pub statistic: StatisticArg,
    #[arg(long = "lambda-mode", default_value = "theorem")]
    pub lambda_mode: LambdaModeArg,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TablesArgs {
    /// 1.5, 2, 2.5 or 3
    #[arg(long)]
    pub ratio: TableRatio,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArgs,
    #[arg(long = "lambda-mode", default_value = "asymptotic")]
    pub lambda_mode: LambdaModeArg,
    /// Skip rows with m above this.
    #[arg(long = "max-m")]
    pub max_m: Option<usize>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArgs,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CgBenchArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub ensemble: EnsembleArgs,
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArgs,
    #[arg(long = "lambda-mode", default_value = "asymptotic")]
    pub lambda_mode: LambdaModeArg,
}

/// Every runnable operation.
#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Evaluate one closed-form bound.
    BoundsEval(BoundsEvalArgs),
    /// Estimate Q(m, n) = E‖X‖/√n.
    EstimateQ(EstimateQArgs),
    /// Empirical tail of κ, optionally checked against the smoothed tail theorem.
    Tail(TailArgs),
    /// Sample mean of κ or ln κ.
    Expect(ExpectArgs),
    /// Reproduce one of the published Avr(ln κ) tables.
    Tables(TablesArgs),
    /// Run the full inequality battery.
    Verify(VerifyArgs),
    /// Conjugate gradients on A Aᵀ for sampled A.
    CgBench(CgBenchArgs),
    /// Check the analytic inequalities on their grids.
    Lemmas,
}

/// Everything that determines a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    pub format: Format,
}

/// Result of a run: the serialized report, a one-line summary and whether
/// every verdict passed.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub output: String,
    pub summary: String,
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Full JSON report: config, result payload, verdicts.
fn envelope(cfg: &RunConfig, result: Value, verdicts: &[Verdict], warnings: &[String]) -> String {
    let passed = verdicts.iter().all(|v| v.passed);
    let doc = json!({
        "config": cfg,
        "result": result,
        "verdicts": verdicts,
        "warnings": warnings,
        "passed": passed,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("report is serializable");
    s.push('\n');
    s
}

fn summary_line(name: &str, verdicts: &[Verdict]) -> String {
    let failed = verdicts.iter().filter(|v| !v.passed).count();
    if verdicts.is_empty() {
        format!("{name}: done")
    } else if failed == 0 {
        format!("{name}: {} checks passed", verdicts.len())
    } else {
        format!("{name}: {failed} of {} checks FAILED", verdicts.len())
    }
}

fn csv_unsupported(name: &str) -> CliError {
    config_err(format!("{name} has no CSV output; use --format json"))
}

/// Loads the `config` object embedded in a report.
pub fn config_from_report(report: &str) -> Result<RunConfig, CliError> {
    let v: Value = serde_json::from_str(report).map_err(|e| config_err(format!("report is not JSON: {e}")))?;
    let cfg = v.get("config").ok_or_else(|| config_err("report has no config"))?;
    serde_json::from_value(cfg.clone()).map_err(|e| config_err(format!("invalid embedded config: {e}")))
}

/// Runs one configuration on the current rayon pool.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match &cfg.command {
        Command::BoundsEval(a) => run_bounds_eval(cfg, a),
        Command::EstimateQ(a) => run_estimate_q(cfg, a),
        Command::Tail(a) => run_tail(cfg, a),
        Command::Expect(a) => run_expect(cfg, a),
        Command::Tables(a) => run_tables(cfg, a),
        Command::Verify(a) => run_verify(cfg, a),
        Command::CgBench(a) => run_cg(cfg, a),
        Command::Lemmas => run_lemmas(cfg),
    }
}

struct Inputs<'a> {
    op: &'a BoundsEvalArgs,
    used: BTreeMap<&'static str, Value>,
}

impl<'a> Inputs<'a> {
    fn take<T: Copy + Serialize>(&mut self, name: &'static str, v: Option<T>) -> Result<T, CliError> {
        let v = v.ok_or_else(|| config_err(format!("--op {} needs --{name}", self.op.op.name())))?;
        self.used.insert(name, json!(v));
        Ok(v)
    }

    fn mode(&mut self) -> LambdaMode {
        self.used.insert("lambda_mode", json!(self.op.lambda_mode));
        self.op.lambda_mode.into()
    }

    fn ctx(&mut self) -> Result<BoundContext, CliError> {
        let a = self.op;
        let m = self.take("m", a.m)?;
        let n = self.take("n", a.n)?;
        let sigma = self.take("sigma", a.sigma)?;
        let q = self.take("q", a.q)?;
        let mode = self.mode();
        BoundContext::new(m, n, sigma, mode, q).map_err(lib_err)
    }
}

fn run_bounds_eval(cfg: &RunConfig, a: &BoundsEvalArgs) -> Result<Outcome, CliError> {
    use BoundOp as O;
    let mut i = Inputs {
        op: a,
        used: BTreeMap::new(),
    };
    let value: Value = match a.op {
        O::CLambda => json!(bounds::c_lambda(i.take("lambda", a.lambda)?).map_err(lib_err)?),
        O::Zeta => json!(bounds::zeta(&i.ctx()?).map_err(lib_err)?),
        O::ZOfEps => {
            let ctx = i.ctx()?;
            json!(bounds::z_of_eps(&ctx, i.take("eps", a.eps)?).map_err(lib_err)?)
        }
        O::TheoremTailBound => {
            let ctx = i.ctx()?;
            json!(bounds::theorem_tail_bound(&ctx, i.take("z", a.z)?).map_err(lib_err)?)
        }
        O::PinvTailBound => {
            let m = i.take("m", a.m)?;
            let n = i.take("n", a.n)?;
            let sigma = i.take("sigma", a.sigma)?;
            let mode = i.mode();
            let ctx = BoundContext::new(m, n, sigma, mode, 1.0).map_err(lib_err)?;
            json!(bounds::pinv_tail_bound(&ctx, i.take("t", a.t)?).map_err(lib_err)?)
        }
        O::PinvDirectionalTailBound => json!(bounds::pinv_directional_tail_bound(
            i.take("m", a.m)?,
            i.take("n", a.n)?,
            i.take("sigma", a.sigma)?,
            i.take("xi", a.xi)?
        )
        .map_err(lib_err)?),
        O::ChenDongarraBounds => json!(bounds::chen_dongarra_bounds(
            i.take("m", a.m)?,
            i.take("n", a.n)?,
            i.take("x", a.x)?
        )
        .map_err(lib_err)?),
        O::EdelmanLimit => json!(bounds::edelman_limit(i.take("lambda", a.lambda)?).map_err(lib_err)?),
        O::QLimit => json!(bounds::q_limit(i.take("lambda", a.lambda)?).map_err(lib_err)?),
        O::QAnalyticBounds => {
            json!(bounds::q_analytic_bounds(i.take("m", a.m)?, i.take("n", a.n)?).map_err(lib_err)?)
        }
        O::ExpectationBound => json!(bounds::expectation_bound(i.take("lambda", a.lambda)?).map_err(lib_err)?),
        O::LnExpectationBound => {
            json!(bounds::ln_expectation_bound(i.take("lambda", a.lambda)?).map_err(lib_err)?)
        }
        O::MuCdw => json!(bounds::mu_cdw(
            i.take("m", a.m)?,
            i.take("n", a.n)?,
            i.take("sigma", a.sigma)?,
            i.take("r", a.r)?
        )
        .map_err(lib_err)?),
        O::LopBound => json!(bounds::lop_bound(
            i.take("m", a.m)?,
            i.take("n", a.n)?,
            i.take("kappa", a.kappa)?,
            i.take("offset", Some(a.offset.unwrap_or(0.0)))?
        )
        .map_err(lib_err)?),
        O::CgIterationBound => {
            json!(bounds::cg_iteration_bound(i.take("kappa", a.kappa)?, i.take("eps", a.eps)?).map_err(lib_err)?)
        }
        O::CgCostAndBreakeven => json!(bounds::cg_cost_and_breakeven(
            i.take("n", a.n)?,
            i.take("lambda", a.lambda)?,
            i.take("eps", a.eps)?,
            i.take("lower_order", Some(a.lower_order.unwrap_or(0.0)))?
        )
        .map_err(lib_err)?),
    };
    if cfg.format == Format::Csv {
        return Err(csv_unsupported("bounds-eval"));
    }
    let doc = json!({
        "op": a.op.name(),
        "inputs": i.used,
        "value": value,
        "config": cfg,
    });
    let mut output = serde_json::to_string_pretty(&doc).expect("serializable");
    output.push('\n');
    Ok(Outcome {
        summary: format!("{} = {}", a.op.name(), value),
        output,
        passed: true,
    })
}

fn run_estimate_q(cfg: &RunConfig, a: &EstimateQArgs) -> Result<Outcome, CliError> {
    if cfg.format == Format::Csv {
        return Err(csv_unsupported("estimate-q"));
    }
    let method = match a.method {
        MethodArg::Dense => QMethod::Dense,
        MethodArg::Bidiagonal => QMethod::Bidiagonal,
    };
    let q = estimate_q(a.m, a.n, a.trials, a.seed.seed(), method).map_err(lib_err)?;
    let mut verdicts = Vec::new();
    if let (Some(iv), Some(ok)) = (q.analytic, q.within_analytic_bounds) {
        let slack = 3.0 * q.standard_error;
        verdicts.push(Verdict {
            check: format!("q_within_analytic_bounds m={} n={}", a.m, a.n),
            inequality: "sqrt(n/(n+1)) - 3 se <= Q <= min(2(1 + sqrt(2 ln(2m-1)/n) + 1/sqrt(n)), 6) + 3 se".into(),
            lhs: q.estimate,
            rhs: if q.estimate < iv.lower { iv.lower } else { iv.upper },
            slack,
            passed: ok,
        });
    }
    Ok(Outcome {
        summary: format!(
            "Q({},{}) = {:.6} ± {:.6}; {}",
            a.m,
            a.n,
            q.estimate,
            q.standard_error,
            summary_line("estimate-q", &verdicts)
        ),
        output: envelope(cfg, json!(q), &verdicts, &[]),
        passed: verdicts.iter().all(|v| v.passed),
    })
}

fn run_tail(cfg: &RunConfig, a: &TailArgs) -> Result<Outcome, CliError> {
    let e = a.ensemble.ensemble()?;
    if a.trials < smoothcond::experiments::MIN_TAIL_TRIALS {
        return Err(config_err(format!("tail needs at least 1000 trials, got {}", a.trials)));
    }
    if let Some(k) = a.z_grid {
        if k == 0 {
            return Err(config_err("--z-grid must be positive"));
        }
        if !(a.ensemble.sigma > 0.0 && a.ensemble.sigma <= 1.0) {
            return Err(config_err("the tail theorem needs 0 < sigma <= 1"));
        }
        if a.ensemble.m > a.ensemble.n {
            return Err(config_err("the tail theorem needs m <= n"));
        }
    }
    let seed = a.seed.seed();
    if cfg.format == Format::Csv {
        let records = run_trials(&e, a.trials, seed).map_err(lib_err)?;
        let mut buf = Vec::new();
        write_trials_csv(&records, &e, &mut buf).map_err(runtime_err)?;
        return Ok(Outcome {
            output: String::from_utf8(buf).expect("ascii"),
            summary: format!("tail: {} trials dumped", a.trials),
            passed: true,
        });
    }
    let records = run_trials(&e, a.trials, seed).map_err(lib_err)?;
    let tail = tail_from_records(&records, &a.thresholds);
    let mut result = json!({ "empirical": tail });
    let mut report = ExperimentReport::default();
    if let Some(k) = a.z_grid {
        let q = match a.q {
            Some(q) => q,
            None => {
                estimate_q(a.ensemble.m, a.ensemble.n, 2000, seed.derive("q"), QMethod::Dense)
                    .map_err(lib_err)?
                    .estimate
            }
        };
        report = theorem_tail_suite(&e, q, k, a.trials, seed).map_err(lib_err)?;
        result["q_value"] = json!(q);
        result["theorem"] = json!({ "tails": report.tails, "estimates": report.estimates });
    }
    let verdicts = report.verdicts;
    let mut warnings = report.warnings;
    if tail.rank_deficient > 0 {
        warnings.push(format!("{} rank-deficient draws counted as kappa = inf", tail.rank_deficient));
    }
    Ok(Outcome {
        summary: summary_line("tail", &verdicts),
        output: envelope(cfg, result, &verdicts, &warnings),
        passed: verdicts.iter().all(|v| v.passed),
    })
}

fn run_expect(cfg: &RunConfig, a: &ExpectArgs) -> Result<Outcome, CliError> {
    let e = a.ensemble.ensemble()?;
    if a.trials < smoothcond::experiments::MIN_EXPECTATION_TRIALS {
        return Err(config_err(format!("expect needs at least 100 trials, got {}", a.trials)));
    }
    let records = run_trials(&e, a.trials, a.seed.seed()).map_err(lib_err)?;
    if cfg.format == Format::Csv {
        let mut buf = Vec::new();
        write_trials_csv(&records, &e, &mut buf).map_err(runtime_err)?;
        return Ok(Outcome {
            output: String::from_utf8(buf).expect("ascii"),
            summary: format!("expect: {} trials dumped", a.trials),
            passed: true,
        });
    }
    let statistic = match a.statistic {
        StatisticArg::Kappa => Statistic::Kappa,
        StatisticArg::LnKappa => Statistic::LnKappa,
    };
    let mut verdicts = Vec::new();
    let mut warnings = Vec::new();
    let est = match expectation_from_records(&records, statistic) {
        Ok(est) => est,
        Err(smoothcond::Error::RankDeficientDraws { count, trials }) => {
            verdicts.push(Verdict::within(
                "expectation_defined",
                "rank-deficient draws <= 0",
                count as f64,
                0.0,
            ));
            return Ok(Outcome {
                summary: format!("expect: {count} of {trials} draws rank deficient; mean undefined"),
                output: envelope(cfg, Value::Null, &verdicts, &warnings),
                passed: false,
            });
        }
        Err(e) => return Err(lib_err(e)),
    };
    if est.heavy_tail {
        warnings.push(format!(
            "largest draw contributes {:.1}% of the sample mean",
            100.0 * est.top_share.unwrap_or(0.0)
        ));
    }
    let (m, n) = (a.ensemble.m, a.ensemble.n);
    let center_norm = spectral_norm(e.center()).map_err(lib_err)?;
    let mode: LambdaMode = a.lambda_mode.into();
    let mut result = json!({ "estimate": est });
    if m <= n && e.in_smoothed_regime() && center_norm <= 1.0 + 1e-12 {
        let bound = bounds::expectation_bound(mode.lambda(m, n)).map_err(lib_err)?;
        let (value, rhs, ineq) = match statistic {
            Statistic::Kappa => (est.mean, bound, "mean kappa <= 20.1/(1-lambda)"),
            Statistic::LnKappa => (est.mean, bound.ln(), "mean ln kappa <= ln(20.1/(1-lambda))"),
        };
        verdicts.push(Verdict::le(
            format!("expectation_bound m={m} n={n}"),
            ineq,
            value,
            rhs,
            3.0 * est.standard_error,
        ));
        result["bound"] = json!(rhs);
    } else {
        warnings.push("expectation bound assumes m <= n, 0 < sigma <= 1 and ||center|| <= 1; not checked".into());
    }
    Ok(Outcome {
        summary: format!(
            "mean = {:.6} ± {:.6}; {}",
            est.mean,
            est.standard_error,
            summary_line("expect", &verdicts)
        ),
        output: envelope(cfg, result, &verdicts, &warnings),
        passed: verdicts.iter().all(|v| v.passed),
    })
}

fn run_tables(cfg: &RunConfig, a: &TablesArgs) -> Result<Outcome, CliError> {
    if a.trials < 2 {
        return Err(config_err("tables needs at least 2 trials per row"));
    }
    let t = reproduce_tables(a.ratio, a.trials, a.seed.seed(), a.lambda_mode.into(), a.max_m).map_err(lib_err)?;
    let verdicts = t.verdicts();
    let output = match cfg.format {
        Format::Csv => t.to_csv(),
        Format::Json => envelope(cfg, json!(t), &verdicts, &[]),
    };
    Ok(Outcome {
        summary: summary_line(&format!("tables n={}m", a.ratio), &verdicts),
        output,
        passed: verdicts.iter().all(|v| v.passed),
    })
}

fn run_verify(cfg: &RunConfig, a: &VerifyArgs) -> Result<Outcome, CliError> {
    if cfg.format == Format::Csv {
        return Err(csv_unsupported("verify"));
    }
    if a.trials < smoothcond::experiments::MIN_TAIL_TRIALS {
        return Err(config_err(format!("verify needs at least 1000 trials, got {}", a.trials)));
    }
    let r = verify_inequality_suite(a.seed.seed(), a.trials).map_err(lib_err)?;
    let result = json!({ "estimates": r.estimates, "tails": r.tails });
    Ok(Outcome {
        summary: summary_line("verify", &r.verdicts),
        output: envelope(cfg, result, &r.verdicts, &r.warnings),
        passed: r.all_passed(),
    })
}

fn run_cg(cfg: &RunConfig, a: &CgBenchArgs) -> Result<Outcome, CliError> {
    let e = a.ensemble.ensemble()?;
    if a.ensemble.m > a.ensemble.n {
        return Err(config_err("cg-bench needs m <= n so that A Aᵀ is nonsingular"));
    }
    let x = cg_experiment(&e, a.eps, a.trials, a.seed.seed(), a.lambda_mode.into()).map_err(lib_err)?;
    let output = match cfg.format {
        Format::Json => envelope(cfg, json!(x), &x.verdicts, &[]),
        Format::Csv => {
            use smoothcond::matrix::fmt_sig17 as f;
            let mut s = String::from(
                "trial,kappa_a,sqrt_kappa_p,iterations,iteration_bound,converged,cost_estimate,relative_error\n",
            );
            for t in &x.trials {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    t.trial_index,
                    f(t.kappa_a),
                    f(t.sqrt_kappa_p),
                    t.iterations,
                    f(t.iteration_bound),
                    t.converged,
                    f(t.cost_estimate),
                    f(t.relative_error)
                ));
            }
            s
        }
    };
    Ok(Outcome {
        summary: format!(
            "mean iterations {:.2} (estimate {:.1}); {}",
            x.mean_iterations,
            x.expected_iterations_estimate,
            summary_line("cg-bench", &x.verdicts)
        ),
        output,
        passed: x.all_passed(),
    })
}

fn run_lemmas(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if cfg.format == Format::Csv {
        return Err(csv_unsupported("lemmas"));
    }
    let checks = bounds::analytic_lemma_checks();
    let verdicts: Vec<Verdict> = checks
        .iter()
        .map(|c| Verdict::ge(c.name.clone(), "min (rhs - lhs) over grid >= 0", c.worst_margin, 0.0, 0.0))
        .collect();
    Ok(Outcome {
        summary: summary_line("lemmas", &verdicts),
        output: envelope(cfg, json!(checks), &verdicts, &[]),
        passed: verdicts.iter().all(|v| v.passed),
    })
}
