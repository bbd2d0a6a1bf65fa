//! Sample means, binomial confidence intervals and the two-sample
//! Kolmogorov–Smirnov test.

use serde::{Deserialize, Serialize};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Width, in standard deviations, of the slack allowed on one-sided bound checks.
pub const CHECK_Z: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub standard_error: f64,
    pub count: usize,
}

/// Sample mean and standard error (`s / √k`, unbiased `s`).
pub fn mean_and_se(xs: &[f64]) -> MeanEstimate {
    let k = xs.len();
    if k == 0 {
        return MeanEstimate {
            mean: f64::NAN,
            standard_error: f64::NAN,
            count: 0,
        };
    }
    let mean = xs.iter().sum::<f64>() / k as f64;
    let se = if k > 1 {
        let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
        (ss / (k - 1) as f64 / k as f64).sqrt()
    } else {
        0.0
    };
    MeanEstimate {
        mean,
        standard_error: se,
        count: k,
    }
}

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    assert!(trials > 0 && successes <= trials);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// An empirical proportion with its Wilson 95% interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Proportion {
    pub successes: usize,
    pub trials: usize,
    pub probability: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
}

impl Proportion {
    pub fn new(successes: usize, trials: usize) -> Self {
        let (ci_lower, ci_upper) = wilson(successes, trials, Z95);
        Self {
            successes,
            trials,
            probability: successes as f64 / trials as f64,
            ci_lower,
            ci_upper,
        }
    }

    /// Wilson interval at [`CHECK_Z`] standard deviations.
    pub fn check_interval(&self) -> (f64, f64) {
        wilson(self.successes, self.trials, CHECK_Z)
    }
}

/// `sup |F_a − F_b|` over the two empirical distribution functions.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty());
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic critical value of the two-sample statistic at level `alpha`:
/// `√(−ln(α/2)/2) · √((n_a + n_b)/(n_a n_b))`.
pub fn ks_critical(alpha: f64, na: usize, nb: usize) -> f64 {
    let (na, nb) = (na as f64, nb as f64);
    (-(alpha / 2.0).ln() / 2.0).sqrt() * ((na + nb) / (na * nb)).sqrt()
}
