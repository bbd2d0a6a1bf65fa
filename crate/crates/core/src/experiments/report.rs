use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::stats::Proportion;

/// Outcome of checking one inequality: `lhs <relation> rhs`, allowing
/// `slack` in the favourable direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub inequality: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub passed: bool,
}

impl Verdict {
    /// `lhs <= rhs + slack`.
    pub fn le(check: impl Into<String>, inequality: impl Into<String>, lhs: f64, rhs: f64, slack: f64) -> Self {
        Self {
            check: check.into(),
            inequality: inequality.into(),
            lhs,
            rhs,
            slack,
            passed: lhs - slack <= rhs,
        }
    }

    /// `lhs >= rhs − slack`.
    pub fn ge(check: impl Into<String>, inequality: impl Into<String>, lhs: f64, rhs: f64, slack: f64) -> Self {
        Self {
            check: check.into(),
            inequality: inequality.into(),
            lhs,
            rhs,
            slack,
            passed: lhs + slack >= rhs,
        }
    }

    /// Empirical probability `<=` a bound, with the 3σ Wilson margin as slack.
    pub fn tail_le(check: impl Into<String>, inequality: impl Into<String>, p: &Proportion, bound: f64) -> Self {
        let (lo, _) = p.check_interval();
        Self::le(check, inequality, p.probability, bound, p.probability - lo)
    }

    /// Empirical probability `>=` a bound, with the 3σ Wilson margin as slack.
    pub fn tail_ge(check: impl Into<String>, inequality: impl Into<String>, p: &Proportion, bound: f64) -> Self {
        let (_, hi) = p.check_interval();
        Self::ge(check, inequality, p.probability, bound, hi - p.probability)
    }

    /// A boolean check whose sides are a measured error and its tolerance.
    pub fn within(check: impl Into<String>, inequality: impl Into<String>, error: f64, tolerance: f64) -> Self {
        Self::le(check, inequality, error, tolerance, 0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedEstimate {
    pub name: String,
    pub mean: f64,
    pub standard_error: f64,
}

/// An empirical tail probability next to the bound it is checked against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedTail {
    pub name: String,
    pub threshold: f64,
    pub probability: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub trials: usize,
    pub bound: f64,
}

impl NamedTail {
    pub fn new(name: impl Into<String>, threshold: f64, p: &Proportion, bound: f64) -> Self {
        Self {
            name: name.into(),
            threshold,
            probability: p.probability,
            ci_lower: p.ci_lower,
            ci_upper: p.ci_upper,
            trials: p.trials,
            bound,
        }
    }
}

/// Aggregated results of an experiment. Serializes deterministically, so
/// equal runs give byte-identical JSON.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    /// Echo of whatever configuration produced the report.
    pub config: Value,
    pub estimates: Vec<NamedEstimate>,
    pub tails: Vec<NamedTail>,
    pub verdicts: Vec<Verdict>,
    pub warnings: Vec<String>,
}

impl ExperimentReport {
    pub fn new(config: Value) -> Self {
        Self {
            config,
            ..Self::default()
        }
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.passed)
    }

    pub fn estimate(&mut self, name: impl Into<String>, mean: f64, standard_error: f64) {
        self.estimates.push(NamedEstimate {
            name: name.into(),
            mean,
            standard_error,
        });
    }

    /// Appends another report's results, keeping this report's config.
    pub fn merge(&mut self, other: ExperimentReport) {
        self.estimates.extend(other.estimates);
        self.tails.extend(other.tails);
        self.verdicts.extend(other.verdicts);
        self.warnings.extend(other.warnings);
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }
}
