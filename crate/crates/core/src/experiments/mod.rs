//! Monte Carlo harness: condition-number trials over Gaussian ensembles,
//! estimates of `Q(m, n)`, empirical tails and expectations, reproduction
//! of the published simulation tables, and a battery of bound checks.
//!
//! Trial `i` of a run with master seed `s` draws from stream `(s, i)`.
//! Trials run on the rayon pool and are collected in index order, so every
//! aggregate is independent of the number of threads.

mod report;
mod suite;
mod tables;

use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{q_analytic_bounds, Interval};
use crate::error::{domain, Error, Result};
use crate::matrix::{fmt_sig17, Matrix};
use crate::pinv::rank_tol;
use crate::sampling::{GaussianEnsemble, Seed};
use crate::stats::{mean_and_se, Proportion};
use crate::svd::singular_values;

pub use report::{ExperimentReport, NamedEstimate, NamedTail, Verdict};
pub use suite::{chen_dongarra_suite, run_suite, theorem_tail_suite, verify_inequality_suite, Suite};
pub use tables::{
    printed_table, reproduce_tables, PrintedRow, TableRatio, TableReport, TableRow, BOUND_COLUMN_TOLERANCE, TABLE_TOLERANCE,
};

/// Minimum trial counts enforced by the estimators.
pub const MIN_Q_TRIALS: usize = 100;
pub const MIN_TAIL_TRIALS: usize = 1000;
pub const MIN_EXPECTATION_TRIALS: usize = 100;

/// Share of the sample mean contributed by the largest draw above which an
/// expectation estimate is flagged as heavy tailed.
pub const HEAVY_TAIL_SHARE: f64 = 0.2;

/// Measurements of one sampled matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: u64,
    /// `‖A‖ ‖A†‖`; infinite for a rank-deficient draw.
    pub kappa: f64,
    pub ln_kappa: f64,
    pub spectral_norm: f64,
    pub pinv_norm: f64,
    pub seed: Seed,
}

impl TrialRecord {
    /// Measures `a`, treating `σ_min <= rank_tol · σ_max` as `κ = ∞`.
    pub fn measure(trial_index: u64, seed: Seed, a: &Matrix) -> Result<Self> {
        let s = singular_values(a)?;
        let smax = s[0];
        let smin = s[s.len() - 1];
        let (pinv_norm, kappa) = if smax == 0.0 || smin <= rank_tol(a.rows(), a.cols()) * smax {
            (f64::INFINITY, f64::INFINITY)
        } else {
            (1.0 / smin, smax / smin)
        };
        Ok(Self {
            trial_index,
            kappa,
            ln_kappa: kappa.ln(),
            spectral_norm: smax,
            pinv_norm,
            seed,
        })
    }

    pub fn is_rank_deficient(&self) -> bool {
        !self.kappa.is_finite()
    }
}

/// Runs `trials` independent computations, trial `i` seeded by
/// `seed.with_stream(i)`, and returns the results in index order.
pub fn par_trials<T, F>(trials: usize, seed: Seed, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, Seed) -> Result<T> + Sync,
{
    (0..trials as u64)
        .into_par_iter()
        .map(|i| f(i, seed.with_stream(i)))
        .collect()
}

/// Samples `trials` matrices from `e` and measures each.
pub fn run_trials(e: &GaussianEnsemble, trials: usize, seed: Seed) -> Result<Vec<TrialRecord>> {
    par_trials(trials, seed, |i, s| {
        let a = s.stream().gaussian_matrix(e);
        TrialRecord::measure(i, s, &a)
    })
}

/// Writes the per-trial CSV dump (`trial,m,n,sigma,kappa,ln_kappa,spec_norm,pinv_norm`).
pub fn write_trials_csv<W: Write>(records: &[TrialRecord], e: &GaussianEnsemble, mut w: W) -> Result<()> {
    writeln!(w, "trial,m,n,sigma,kappa,ln_kappa,spec_norm,pinv_norm")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.trial_index,
            e.rows(),
            e.cols(),
            fmt_sig17(e.sigma()),
            fmt_sig17(r.kappa),
            fmt_sig17(r.ln_kappa),
            fmt_sig17(r.spectral_norm),
            fmt_sig17(r.pinv_norm)
        )?;
    }
    Ok(())
}

/// How `Q(m, n)` is sampled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QMethod {
    /// Spectral norm of a dense standard Gaussian matrix.
    Dense,
    /// Spectral norm of the bidiagonal χ model (requires `m <= n`).
    Bidiagonal,
}

impl FromStr for QMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(Self::Dense),
            "bidiagonal" => Ok(Self::Bidiagonal),
            other => Err(Error::Parse(format!(
                "unknown method {other:?} (expected dense or bidiagonal)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QEstimate {
    pub m: usize,
    pub n: usize,
    pub method: QMethod,
    pub trials: usize,
    pub estimate: f64,
    pub standard_error: f64,
    /// The analytic interval, when defined (`n > 1`).
    pub analytic: Option<Interval>,
    /// Whether the estimate lies in the analytic interval widened by three
    /// standard errors.
    pub within_analytic_bounds: Option<bool>,
}

/// Monte Carlo estimate of `Q(m, n) = E‖X‖ / √n`.
pub fn estimate_q(m: usize, n: usize, trials: usize, seed: Seed, method: QMethod) -> Result<QEstimate> {
    if m == 0 || n == 0 {
        return Err(Error::Dimension(format!("need positive sizes, got {m}x{n}")));
    }
    if trials < MIN_Q_TRIALS {
        return Err(domain("trials", trials as f64, "at least 100"));
    }
    if method == QMethod::Bidiagonal && m > n {
        return Err(Error::Dimension(format!(
            "bidiagonal model needs m <= n, got {m}x{n}"
        )));
    }
    let scale = 1.0 / (n as f64).sqrt();
    let norms = par_trials(trials, seed, |_, s| {
        let mut st = s.stream();
        let v = match method {
            QMethod::Dense => singular_values(&st.standard_gaussian(m, n))?[0],
            QMethod::Bidiagonal => st.bidiagonal_model(m, n).spectral_norm()?,
        };
        Ok(v * scale)
    })?;
    let est = mean_and_se(&norms);
    let analytic = q_analytic_bounds(m, n).ok();
    let within = analytic.map(|i| {
        let slack = 3.0 * est.standard_error;
        i.lower - slack <= est.mean && est.mean <= i.upper + slack
    });
    Ok(QEstimate {
        m,
        n,
        method,
        trials,
        estimate: est.mean,
        standard_error: est.standard_error,
        analytic,
        within_analytic_bounds: within,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailPoint {
    pub threshold: f64,
    #[serde(flatten)]
    pub proportion: Proportion,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub trials: usize,
    /// Draws with `κ = ∞`; they count as exceeding every threshold.
    pub rank_deficient: usize,
    pub points: Vec<TailPoint>,
}

/// Fraction of records with `κ >= T` for each threshold `T`.
pub fn tail_from_records(records: &[TrialRecord], thresholds: &[f64]) -> TailEstimate {
    let trials = records.len();
    let points = thresholds
        .iter()
        .map(|&t| {
            let hits = records.iter().filter(|r| r.kappa >= t).count();
            TailPoint {
                threshold: t,
                proportion: Proportion::new(hits, trials),
            }
        })
        .collect();
    TailEstimate {
        trials,
        rank_deficient: records.iter().filter(|r| r.is_rank_deficient()).count(),
        points,
    }
}

/// Empirical `P{κ(A) >= T}` with Wilson 95% intervals.
pub fn empirical_tail(e: &GaussianEnsemble, thresholds: &[f64], trials: usize, seed: Seed) -> Result<TailEstimate> {
    if trials < MIN_TAIL_TRIALS {
        return Err(domain("trials", trials as f64, "at least 1000"));
    }
    let records = run_trials(e, trials, seed)?;
    Ok(tail_from_records(&records, thresholds))
}

/// Which per-trial quantity an expectation is taken over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Kappa,
    LnKappa,
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kappa" => Ok(Self::Kappa),
            "ln_kappa" | "ln-kappa" => Ok(Self::LnKappa),
            other => Err(Error::Parse(format!(
                "unknown statistic {other:?} (expected kappa or ln_kappa)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectationEstimate {
    pub statistic: Statistic,
    pub trials: usize,
    pub mean: f64,
    pub standard_error: f64,
    /// Largest draw divided by the sum of all draws (`κ` only).
    pub top_share: Option<f64>,
    pub heavy_tail: bool,
}

pub fn expectation_from_records(records: &[TrialRecord], statistic: Statistic) -> Result<ExpectationEstimate> {
    let deficient = records.iter().filter(|r| r.is_rank_deficient()).count();
    if deficient > 0 {
        return Err(Error::RankDeficientDraws {
            count: deficient,
            trials: records.len(),
        });
    }
    let xs: Vec<f64> = records
        .iter()
        .map(|r| match statistic {
            Statistic::Kappa => r.kappa,
            Statistic::LnKappa => r.ln_kappa,
        })
        .collect();
    let est = mean_and_se(&xs);
    let top_share = match statistic {
        Statistic::Kappa => {
            let top = xs.iter().copied().fold(0.0, f64::max);
            Some(top / xs.iter().sum::<f64>())
        }
        Statistic::LnKappa => None,
    };
    Ok(ExpectationEstimate {
        statistic,
        trials: records.len(),
        mean: est.mean,
        standard_error: est.standard_error,
        top_share,
        heavy_tail: top_share.is_some_and(|s| s > HEAVY_TAIL_SHARE),
    })
}

/// Sample mean of `κ` or `ln κ`. A rank-deficient draw leaves the mean
/// undefined and is reported as an error with the count.
pub fn empirical_expectation(
    e: &GaussianEnsemble,
    trials: usize,
    seed: Seed,
    statistic: Statistic,
) -> Result<ExpectationEstimate> {
    if trials < MIN_EXPECTATION_TRIALS {
        return Err(domain("trials", trials as f64, "at least 100"));
    }
    expectation_from_records(&run_trials(e, trials, seed)?, statistic)
}

/// Scaling of the all-ones center.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterScale {
    /// `ones(m, n) / √(mn)`, spectral norm 1.
    UnitNorm,
    /// `√m · ones(m, n) / √(mn)`.
    SqrtM,
}

pub fn make_ones_center(m: usize, n: usize, scale: CenterScale) -> Matrix {
    let base = 1.0 / ((m * n) as f64).sqrt();
    let v = match scale {
        CenterScale::UnitNorm => base,
        CenterScale::SqrtM => base * (m as f64).sqrt(),
    };
    Matrix::from_fn(m, n, |_, _| v)
}
