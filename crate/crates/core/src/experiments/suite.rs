//! Fixed batteries of empirical checks against the closed-form bounds.
//!
//! Tail checks are one-sided: an empirical probability passes against an
//! upper bound when its 3σ Wilson interval reaches down to the bound (and
//! symmetrically for lower bounds).

use std::f64::consts::PI;

use serde_json::json;

use super::{estimate_q, make_ones_center, par_trials, run_trials, tail_from_records, CenterScale, QMethod};
use super::{ExperimentReport, NamedTail, Verdict};
use crate::bounds::{
    chen_dongarra_bounds, pinv_directional_threshold, pinv_directional_tail_bound, pinv_tail_bound,
    pinv_tail_threshold, theorem_kappa_threshold, theorem_tail_bound, zeta, BoundContext, LambdaMode,
};
use crate::error::{Error, Result};
use crate::matrix::{dot, norm, Matrix};
use crate::pinv::{moore_penrose_residuals, pseudo_inverse, row_complement, sharpest_direction, solve_min_norm, tol_mp};
use crate::sampling::{GaussianEnsemble, SampleStream, Seed};
use crate::stats::{ks_critical, ks_statistic, mean_and_se, Proportion};
use crate::svd::{bidiagonalize, singular_values, spectral_norm, svd, tol_svd};

/// Number of random matrices used by the exact-identity checks.
pub const IDENTITY_SAMPLES: usize = 1000;
/// Level of the two-sample Kolmogorov–Smirnov checks.
pub const KS_ALPHA: f64 = 0.01;
/// Tail probabilities the bound thresholds are solved for.
pub const BETAS: [f64; 3] = [0.5, 0.1, 0.01];

/// Which batteries [`verify_inequality_suite`] runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    SphericalCaps,
    GaussianConcentration,
    MaxChi,
    NormDeviation,
    PinvTail,
    DirectionalTail,
    ExactIdentities,
    Distributional,
}

impl Suite {
    pub const ALL: [Self; 8] = [
        Self::SphericalCaps,
        Self::GaussianConcentration,
        Self::MaxChi,
        Self::NormDeviation,
        Self::PinvTail,
        Self::DirectionalTail,
        Self::ExactIdentities,
        Self::Distributional,
    ];

    fn tag(self) -> &'static str {
        match self {
            Self::SphericalCaps => "spherical_caps",
            Self::GaussianConcentration => "gaussian_concentration",
            Self::MaxChi => "max_chi",
            Self::NormDeviation => "norm_deviation",
            Self::PinvTail => "pinv_tail",
            Self::DirectionalTail => "directional_tail",
            Self::ExactIdentities => "exact_identities",
            Self::Distributional => "distributional",
        }
    }
}

/// Runs every battery in [`Suite::ALL`] with `trials` draws per tail check.
pub fn verify_inequality_suite(seed: Seed, trials: usize) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new(json!({
        "suite": "inequalities",
        "master_seed": seed.master,
        "trials": trials,
    }));
    for s in Suite::ALL {
        report.merge(run_suite(s, seed.derive(s.tag()), trials)?);
    }
    Ok(report)
}

/// Runs one battery.
pub fn run_suite(suite: Suite, seed: Seed, trials: usize) -> Result<ExperimentReport> {
    let mut r = ExperimentReport::default();
    match suite {
        Suite::SphericalCaps => spherical_caps(&mut r, seed, trials)?,
        Suite::GaussianConcentration => gaussian_concentration(&mut r, seed, trials)?,
        Suite::MaxChi => max_chi(&mut r, seed)?,
        Suite::NormDeviation => norm_deviation(&mut r, seed, trials)?,
        Suite::PinvTail => pinv_tail(&mut r, seed, trials)?,
        Suite::DirectionalTail => directional_tail(&mut r, seed, trials)?,
        Suite::ExactIdentities => exact_identities(&mut r, seed)?,
        Suite::Distributional => distributional(&mut r, seed)?,
    }
    Ok(r)
}

fn count<F>(trials: usize, seed: Seed, hit: F) -> Result<Proportion>
where
    F: Fn(&mut SampleStream) -> Result<bool> + Sync,
{
    let hits = par_trials(trials, seed, |_, s| hit(&mut s.stream()))?;
    Ok(Proportion::new(hits.iter().filter(|&&h| h).count(), trials))
}

fn push_tail_le(r: &mut ExperimentReport, name: String, ineq: &str, threshold: f64, p: &Proportion, bound: f64) {
    r.tails.push(NamedTail::new(name.clone(), threshold, p, bound));
    r.verdicts.push(Verdict::tail_le(name, ineq, p, bound));
}

fn push_tail_ge(r: &mut ExperimentReport, name: String, ineq: &str, threshold: f64, p: &Proportion, bound: f64) {
    r.tails.push(NamedTail::new(name.clone(), threshold, p, bound));
    r.verdicts.push(Verdict::tail_ge(name, ineq, p, bound));
}

fn q_estimate(r: &mut ExperimentReport, m: usize, n: usize, trials: usize, seed: Seed) -> Result<f64> {
    let q = estimate_q(m, n, trials.max(super::MIN_Q_TRIALS), seed, QMethod::Dense)?;
    r.estimate(format!("Q({m},{n})"), q.estimate, q.standard_error);
    Ok(q.estimate)
}

fn spherical_caps(r: &mut ExperimentReport, seed: Seed, trials: usize) -> Result<()> {
    for (i, m) in [2usize, 5, 20].into_iter().enumerate() {
        for (j, xi) in [0.1, 0.5, 0.9].into_iter().enumerate() {
            let s = seed.with_stream((3 * i + j) as u64).derive("cap");
            let p = count(trials, s, |st| Ok(st.unit_sphere(m)[0].abs() >= xi))?;
            let bound = (2.0 / (PI * m as f64)).sqrt() * (1.0 - xi * xi).powf(0.5 * (m as f64 - 1.0));
            push_tail_ge(
                r,
                format!("spherical_cap m={m} xi={xi}"),
                "P{|u'v| >= xi} >= sqrt(2/(pi m)) (1 - xi^2)^((m-1)/2)",
                xi,
                &p,
                bound,
            );
        }
    }
    Ok(())
}

fn gaussian_concentration(r: &mut ExperimentReport, seed: Seed, trials: usize) -> Result<()> {
    let (m, n) = (10, 20);
    let q = q_estimate(r, m, n, trials, seed.derive("q"))?;
    let records = run_trials(&GaussianEnsemble::standard(m, n), trials, seed.derive("draws"))?;
    for t in [0.5, 1.0, 2.0] {
        let threshold = q * (n as f64).sqrt() + t;
        let hits = records.iter().filter(|x| x.spectral_norm >= threshold).count();
        let p = Proportion::new(hits, records.len());
        push_tail_le(
            r,
            format!("gaussian_concentration m={m} n={n} t={t}"),
            "P{||X|| >= Q sqrt(n) + t} <= exp(-t^2/2)",
            threshold,
            &p,
            (-0.5 * t * t).exp(),
        );
    }
    Ok(())
}

/// Trials for the max-of-χ check.
pub const MAX_CHI_TRIALS: usize = 2000;

fn max_chi(r: &mut ExperimentReport, seed: Seed) -> Result<()> {
    let n = 50usize;
    let maxima = par_trials(MAX_CHI_TRIALS, seed, |_, s| {
        let mut st = s.stream();
        Ok((1..=n).map(|f| st.chi(f)).fold(0.0, f64::max))
    })?;
    let est = mean_and_se(&maxima);
    r.estimate(format!("E max chi_i (n={n})"), est.mean, est.standard_error);
    let bound = (n as f64).sqrt() + (2.0 * (n as f64).ln()).sqrt() + 1.0;
    r.verdicts.push(Verdict::le(
        format!("max_chi n={n}"),
        "E max r_i <= max sqrt(f_i) + sqrt(2 ln n) + 1",
        est.mean,
        bound,
        3.0 * est.standard_error,
    ));
    Ok(())
}

fn centers(m: usize, n: usize) -> [(&'static str, Matrix); 2] {
    [
        ("zero", Matrix::zeros(m, n)),
        ("ones-unit", make_ones_center(m, n, CenterScale::UnitNorm)),
    ]
}

fn norm_deviation(r: &mut ExperimentReport, seed: Seed, trials: usize) -> Result<()> {
    let grid = [(10usize, 20usize, 1.0, 0.5), (10, 20, 1.0, 1.0), (10, 20, 0.5, 0.5), (20, 40, 0.3, 0.3)];
    let mut qs = std::collections::BTreeMap::new();
    for (k, &(m, n, sigma, t)) in grid.iter().enumerate() {
        let q = match qs.get(&(m, n)) {
            Some(&q) => q,
            None => {
                let q = q_estimate(r, m, n, trials, seed.derive(&format!("q/{m}/{n}")))?;
                qs.insert((m, n), q);
                q
            }
        };
        for (label, center) in centers(m, n) {
            let e = GaussianEnsemble::new(center, sigma)?;
            let records = run_trials(&e, trials, seed.derive(&format!("{k}/{label}")))?;
            let threshold = q * sigma * (n as f64).sqrt() + t + 1.0;
            let hits = records.iter().filter(|x| x.spectral_norm >= threshold).count();
            let p = Proportion::new(hits, trials);
            push_tail_le(
                r,
                format!("norm_deviation m={m} n={n} sigma={sigma} t={t} center={label}"),
                "P{||A|| >= Q sigma sqrt(n) + t + 1} <= exp(-t^2/(2 sigma^2))",
                threshold,
                &p,
                (-t * t / (2.0 * sigma * sigma)).exp(),
            );
        }
    }
    Ok(())
}

/// Diagonal center of rank `m − 1` and norm 2.
fn rank_deficient_center(m: usize, n: usize) -> Matrix {
    Matrix::from_fn(m, n, |i, j| if i == j && i + 1 < m { 2.0 } else { 0.0 })
}

fn pinv_tail(r: &mut ExperimentReport, seed: Seed, trials: usize) -> Result<()> {
    for (k, (m, n, sigma)) in [(10usize, 15usize, 1.0), (10, 15, 0.3), (20, 30, 1.0)].into_iter().enumerate() {
        let ctx = BoundContext::new(m, n, sigma, LambdaMode::Theorem, 1.0)?;
        let [zero, ones] = centers(m, n);
        for (label, center) in [zero, ones, ("rank-deficient", rank_deficient_center(m, n))] {
            let e = GaussianEnsemble::new(center, sigma)?;
            let records = run_trials(&e, trials, seed.derive(&format!("{k}/{label}")))?;
            for beta in BETAS {
                let t = pinv_tail_threshold(&ctx, beta)?;
                let threshold = t / (1.0 - ctx.lambda());
                let hits = records.iter().filter(|x| x.pinv_norm >= threshold).count();
                let p = Proportion::new(hits, trials);
                push_tail_le(
                    r,
                    format!("pinv_tail m={m} n={n} sigma={sigma} beta={beta} center={label}"),
                    "P{||A^+|| >= t/(1-lambda)} <= c(lambda) (e/(sigma sqrt(n) t))^((1-lambda)n)",
                    threshold,
                    &p,
                    pinv_tail_bound(&ctx, t)?,
                );
            }
        }
    }
    Ok(())
}

fn directional_tail(r: &mut ExperimentReport, seed: Seed, trials: usize) -> Result<()> {
    for (k, (m, n, sigma)) in [(5usize, 6usize, 1.0), (10, 15, 0.5)].into_iter().enumerate() {
        for (label, center) in centers(m, n) {
            let e = GaussianEnsemble::new(center, sigma)?;
            for random_v in [false, true] {
                let vname = if random_v { "random" } else { "e_m" };
                let norms = par_trials(trials, seed.derive(&format!("{k}/{label}/{vname}")), |_, s| {
                    let mut st = s.stream();
                    let a = st.gaussian_matrix(&e);
                    if random_v {
                        let v = st.unit_sphere(m);
                        Ok(norm(&solve_min_norm(&a, &v)?))
                    } else {
                        Ok(1.0 / row_complement(&a)?.norm)
                    }
                })?;
                for beta in BETAS {
                    let xi = pinv_directional_threshold(m, n, sigma, beta)?;
                    let p = Proportion::new(norms.iter().filter(|&&x| x >= xi).count(), trials);
                    push_tail_le(
                        r,
                        format!("directional_tail m={m} n={n} sigma={sigma} beta={beta} center={label} v={vname}"),
                        "P{||A^+ v|| >= xi} <= (2 pi)^(-p/2) O_(n-m) / p (sigma xi)^(-p)",
                        xi,
                        &p,
                        pinv_directional_tail_bound(m, n, sigma, xi)?,
                    );
                }
            }
        }
    }
    Ok(())
}

/// Random shape with `min(m, n) <= 8`; `wide` forces `m <= n`.
fn random_shape(st: &mut SampleStream, wide: bool) -> (usize, usize) {
    let a = 1 + (st.uniform() * 8.0) as usize;
    let b = 1 + (st.uniform() * 12.0) as usize;
    let (lo, hi) = (a.min(b), a.max(b));
    if wide || st.uniform() < 0.5 {
        (lo, hi)
    } else {
        (hi, lo)
    }
}

fn max_of(xs: &[f64]) -> f64 {
    xs.iter().copied().fold(0.0, f64::max)
}

fn exact_identities(r: &mut ExperimentReport, seed: Seed) -> Result<()> {
    let k = IDENTITY_SAMPLES;

    // ‖A† e_m‖ · ‖a_m^⊥‖ = 1.
    let star = par_trials(k, seed.derive("star"), |_, s| {
        let mut st = s.stream();
        let (m, n) = random_shape(&mut st, true);
        let a = st.standard_gaussian(m, n);
        let pinv = pseudo_inverse(&a)?;
        Ok((norm(&pinv.column(m - 1)) * row_complement(&a)?.norm - 1.0).abs())
    })?;
    r.verdicts.push(Verdict::within(
        "row_complement_identity",
        "max |‖A^+ e_m‖ ‖a_m^perp‖ - 1| <= 1e-8",
        max_of(&star),
        1e-8,
    ));

    // ‖A† v‖ >= ‖A†‖ |u_A' v|, with equality at v = u_A.
    let sankar = par_trials(k, seed.derive("sankar"), |_, s| {
        let mut st = s.stream();
        let (m, n) = random_shape(&mut st, true);
        let a = st.standard_gaussian(m, n);
        let pinv = pseudo_inverse(&a)?;
        let pinv_norm = spectral_norm(&pinv)?;
        let u = sharpest_direction(&a)?.vector;
        let v = st.unit_sphere(m);
        let gap = (norm(&pinv.matvec(&v)) - pinv_norm * dot(&u, &v).abs()) / pinv_norm;
        let equality = (norm(&pinv.matvec(&u)) - pinv_norm).abs() / pinv_norm / tol_svd(m, n);
        Ok((gap, equality))
    })?;
    let worst_gap = sankar.iter().map(|x| x.0).fold(f64::INFINITY, f64::min);
    r.verdicts.push(Verdict::ge(
        "sharpest_direction_inequality",
        "min (‖A^+ v‖ - ‖A^+‖ |u_A' v|) / ‖A^+‖ >= -tol_svd",
        worst_gap,
        0.0,
        1e-10,
    ));
    r.verdicts.push(Verdict::within(
        "sharpest_direction_equality",
        "max |‖A^+ u_A‖ - ‖A^+‖| / (‖A^+‖ tol_svd) <= 1",
        max_of(&sankar.iter().map(|x| x.1).collect::<Vec<_>>()),
        1.0,
    ));

    // Moore–Penrose identities, both orientations.
    let mp = par_trials(k, seed.derive("moore_penrose"), |_, s| {
        let mut st = s.stream();
        let (m, n) = random_shape(&mut st, false);
        let a = st.standard_gaussian(m, n);
        let x = pseudo_inverse(&a)?;
        let s = singular_values(&a)?;
        let tol = tol_mp(s[0] / s[s.len() - 1]);
        Ok(max_of(&moore_penrose_residuals(&a, &x)) / tol)
    })?;
    r.verdicts.push(Verdict::within(
        "moore_penrose_identities",
        "max residual / tol_mp <= 1",
        max_of(&mp),
        1.0,
    ));

    // κ(A) = κ(Aᵀ) = κ(cA).
    let inv = par_trials(k, seed.derive("kappa_invariance"), |_, s| {
        let mut st = s.stream();
        let (m, n) = random_shape(&mut st, false);
        let a = st.standard_gaussian(m, n);
        let kappa = |b: &Matrix| -> Result<f64> {
            let s = singular_values(b)?;
            Ok(s[0] / s[s.len() - 1])
        };
        let k0 = kappa(&a)?;
        let mut worst = ((kappa(&a.transpose())? - k0) / k0).abs();
        for c in [1e-6, 1.0, 1e6] {
            worst = worst.max(((kappa(&a.scaled(c))? - k0) / k0).abs());
        }
        Ok(worst)
    })?;
    r.verdicts.push(Verdict::within(
        "kappa_invariance",
        "max relative |kappa(A^T) - kappa(A)|, |kappa(cA) - kappa(A)| <= 1e-10",
        max_of(&inv),
        1e-10,
    ));

    // Bidiagonalization preserves the spectrum.
    let bid = par_trials(k, seed.derive("bidiagonal"), |_, s| {
        let mut st = s.stream();
        let (m, n) = random_shape(&mut st, true);
        let a = st.standard_gaussian(m, n);
        let sa = singular_values(&a)?;
        let sb = bidiagonalize(&a)?.singular_values()?;
        let err = sa.iter().zip(&sb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        Ok(err / (sa[0] * tol_svd(m, n)))
    })?;
    r.verdicts.push(Verdict::within(
        "bidiagonal_spectrum",
        "max |sigma_i(A) - sigma_i(Y)| / (sigma_max tol_svd) <= 1",
        max_of(&bid),
        1.0,
    ));

    // SVD reconstruction and orthogonality.
    let res = par_trials(k, seed.derive("svd"), |_, s| {
        let mut st = s.stream();
        let (m, n) = random_shape(&mut st, false);
        let a = st.standard_gaussian(m, n);
        let f = svd(&a)?;
        let tol = tol_svd(m, n);
        let recon = f.reconstruct().sub(&a).frobenius_norm() / (a.frobenius_norm() * tol);
        let ortho = |q: &Matrix| q.transpose().matmul(q).sub(&Matrix::identity(q.cols())).frobenius_norm() / tol;
        Ok(recon.max(ortho(&f.left_vectors)).max(ortho(&f.right_vectors)))
    })?;
    r.verdicts.push(Verdict::within(
        "svd_residuals",
        "max(reconstruction, orthogonality) / tol_svd <= 1",
        max_of(&res),
        1.0,
    ));
    Ok(())
}

/// Sample sizes for the distributional checks.
pub const KS_BIDIAGONAL_SAMPLES: usize = 5000;
pub const KS_CENTER_SAMPLES: usize = 2000;
pub const Q_CROSS_TRIALS: usize = 2000;

fn distributional(r: &mut ExperimentReport, seed: Seed) -> Result<()> {
    let (m, n) = (10, 15);
    let dense = par_trials(KS_BIDIAGONAL_SAMPLES, seed.derive("dense"), |_, s| {
        Ok(singular_values(&s.stream().standard_gaussian(m, n))?[0])
    })?;
    let bid = par_trials(KS_BIDIAGONAL_SAMPLES, seed.derive("bidiagonal"), |_, s| {
        s.stream().bidiagonal_model(m, n).spectral_norm()
    })?;
    r.verdicts.push(Verdict::le(
        format!("bidiagonal_model_ks m={m} n={n}"),
        "KS(||Y||, ||X||) <= critical value at 1%",
        ks_statistic(&dense, &bid),
        ks_critical(KS_ALPHA, dense.len(), bid.len()),
        0.0,
    ));

    let (m, n) = (10, 20);
    let scaled = GaussianEnsemble::new(make_ones_center(m, n, CenterScale::SqrtM), 1.0)?;
    let unit = GaussianEnsemble::new(make_ones_center(m, n, CenterScale::UnitNorm), 1.0 / (m as f64).sqrt())?;
    let ka: Vec<f64> = run_trials(&scaled, KS_CENTER_SAMPLES, seed.derive("sqrt_m"))?
        .iter()
        .map(|x| x.kappa)
        .collect();
    let kb: Vec<f64> = run_trials(&unit, KS_CENTER_SAMPLES, seed.derive("unit"))?
        .iter()
        .map(|x| x.kappa)
        .collect();
    r.verdicts.push(Verdict::le(
        format!("ones_center_scaling_ks m={m} n={n}"),
        "KS(kappa under N(sqrt(m) A, I), kappa under N(A, I/m)) <= critical value at 1%",
        ks_statistic(&ka, &kb),
        ks_critical(KS_ALPHA, ka.len(), kb.len()),
        0.0,
    ));

    let (m, n) = (10, 15);
    let qd = estimate_q(m, n, Q_CROSS_TRIALS, seed.derive("q_dense"), QMethod::Dense)?;
    let qb = estimate_q(m, n, Q_CROSS_TRIALS, seed.derive("q_bidiagonal"), QMethod::Bidiagonal)?;
    r.estimate(format!("Q({m},{n}) dense"), qd.estimate, qd.standard_error);
    r.estimate(format!("Q({m},{n}) bidiagonal"), qb.estimate, qb.standard_error);
    r.verdicts.push(Verdict::le(
        format!("q_methods_agree m={m} n={n}"),
        "|Q_dense - Q_bidiagonal| <= 3 sqrt(se_d^2 + se_b^2)",
        (qd.estimate - qb.estimate).abs(),
        3.0 * qd.standard_error.hypot(qb.standard_error),
        0.0,
    ));
    Ok(())
}

/// Checks the smoothed tail theorem for one ensemble: on a log-spaced grid
/// of `grid_points` values `z` from `ζ` to `50 ζ`, the empirical
/// `P{κ >= e z / (1 − λ)}` against the theorem's bound. `λ` is taken in
/// theorem mode; `q_value` estimates `Q(m, n)`.
pub fn theorem_tail_suite(
    e: &GaussianEnsemble,
    q_value: f64,
    grid_points: usize,
    trials: usize,
    seed: Seed,
) -> Result<ExperimentReport> {
    let (m, n) = (e.rows(), e.cols());
    let ctx = BoundContext::new(m, n, e.sigma(), LambdaMode::Theorem, q_value)?;
    let z0 = zeta(&ctx)?;
    let mut r = ExperimentReport::default();
    if spectral_norm(e.center())? > 1.0 + 1e-12 {
        r.warnings.push(format!(
            "center has spectral norm above 1; the theorem assumes ||A|| <= 1 (m={m}, n={n})"
        ));
    }
    let zs: Vec<f64> = (0..grid_points)
        .map(|k| {
            let f = if grid_points > 1 { k as f64 / (grid_points - 1) as f64 } else { 0.0 };
            z0 * 50f64.powf(f)
        })
        .collect();
    let thresholds: Vec<f64> = zs.iter().map(|&z| theorem_kappa_threshold(&ctx, z)).collect();
    let records = run_trials(e, trials, seed)?;
    let tail = tail_from_records(&records, &thresholds);
    if tail.rank_deficient > 0 {
        r.warnings.push(format!("{} rank-deficient draws", tail.rank_deficient));
    }
    for (z, pt) in zs.iter().zip(&tail.points) {
        push_tail_le(
            &mut r,
            format!("theorem_tail m={m} n={n} sigma={} z/zeta={:.4}", e.sigma(), z / z0),
            "P{kappa >= e z/(1-lambda)} <= 2 c(lambda) [(Q + sqrt(2 ln 2z) + 1/(sigma sqrt n))/z]^(n-m+1)",
            pt.threshold,
            &pt.proportion,
            theorem_tail_bound(&ctx, *z)?,
        );
    }
    Ok(r)
}

/// Checks the average-case sandwich for standard Gaussian `m × n` at
/// `x = k (n − m + 1)` for each multiple `k` (theorem-mode `λ`).
pub fn chen_dongarra_suite(m: usize, n: usize, multiples: &[f64], trials: usize, seed: Seed) -> Result<ExperimentReport> {
    if m == 0 || m > n {
        return Err(Error::Dimension(format!("need 1 <= m <= n, got {m}x{n}")));
    }
    let lambda = LambdaMode::Theorem.lambda(m, n);
    let p = (n - m + 1) as f64;
    let xs: Vec<f64> = multiples.iter().map(|k| k * p).collect();
    let thresholds: Vec<f64> = xs.iter().map(|x| x / (1.0 - lambda)).collect();
    let records = run_trials(&GaussianEnsemble::standard(m, n), trials, seed)?;
    let tail = tail_from_records(&records, &thresholds);
    let mut r = ExperimentReport::default();
    for (x, pt) in xs.iter().zip(&tail.points) {
        let s = chen_dongarra_bounds(m, n, *x)?;
        push_tail_ge(
            &mut r,
            format!("chen_dongarra_lower m={m} n={n} x={x}"),
            "P{kappa >= x/(1-lambda)} >= (2 pi)^(-1/2) (1/(5x))^(n-m+1)",
            pt.threshold,
            &pt.proportion,
            s.lower,
        );
        push_tail_le(
            &mut r,
            format!("chen_dongarra_upper m={m} n={n} x={x}"),
            "P{kappa >= x/(1-lambda)} <= (2 pi)^(-1/2) (7/x)^(n-m+1)",
            pt.threshold,
            &pt.proportion,
            s.upper,
        );
    }
    Ok(r)
}
