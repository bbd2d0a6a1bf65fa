//! Closed-form tail bounds, limits and cost estimates for condition numbers
//! of Gaussian rectangular matrices. Everything here is deterministic; the
//! Monte Carlo side lives in [`crate::experiments`].
//!
//! Natural logarithms throughout, except [`lop_bound`], which counts decimal
//! digits.

// `!(x <= y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::{E, LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::gamma::{expected_chi, ln_gamma, ln_sphere_area};

/// Constant in the expectation bound `E κ(A) <= 20.1 / (1 − λ)`.
pub const EXPECTATION_CONSTANT: f64 = 20.1;

/// How the elongation `λ` is derived from `(m, n)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LambdaMode {
    /// `λ = (m − 1) / n`, the convention of the tail theorem.
    #[default]
    Theorem,
    /// `λ = m / n`, the convention of the published simulation tables.
    Asymptotic,
}

impl LambdaMode {
    pub fn lambda(self, m: usize, n: usize) -> f64 {
        match self {
            Self::Theorem => (m - 1) as f64 / n as f64,
            Self::Asymptotic => m as f64 / n as f64,
        }
    }

    /// `(1 − λ) n`, computed exactly from integers.
    pub fn exponent(self, m: usize, n: usize) -> f64 {
        match self {
            Self::Theorem => (n + 1 - m) as f64,
            Self::Asymptotic => (n - m) as f64,
        }
    }
}

impl std::str::FromStr for LambdaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem" => Ok(Self::Theorem),
            "asymptotic" => Ok(Self::Asymptotic),
            other => Err(Error::Parse(format!(
                "unknown lambda mode {other:?} (expected theorem or asymptotic)"
            ))),
        }
    }
}

/// Parameters shared by the smoothed tail bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundContext {
    pub m: usize,
    pub n: usize,
    pub sigma: f64,
    pub lambda_mode: LambdaMode,
    /// `Q(m, n) = E‖X‖ / √n`, supplied by the caller (usually estimated).
    pub q_value: f64,
}

impl BoundContext {
    pub fn new(m: usize, n: usize, sigma: f64, lambda_mode: LambdaMode, q_value: f64) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::Dimension(format!("bounds need 1 <= m <= n, got {m}x{n}")));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(domain("sigma", sigma, "finite and > 0"));
        }
        if !(q_value > 0.0 && q_value.is_finite()) {
            return Err(domain("q_value", q_value, "finite and > 0"));
        }
        let lambda = lambda_mode.lambda(m, n);
        if lambda >= 1.0 {
            return Err(domain("lambda", lambda, "in [0, 1)"));
        }
        Ok(Self {
            m,
            n,
            sigma,
            lambda_mode,
            q_value,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda_mode.lambda(self.m, self.n)
    }

    /// `(1 − λ) n`; equals `n − m + 1` in theorem mode.
    pub fn exponent(&self) -> f64 {
        self.lambda_mode.exponent(self.m, self.n)
    }

    fn noise_term(&self) -> f64 {
        1.0 / (self.sigma * (self.n as f64).sqrt())
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if (0.0..1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(domain("lambda", lambda, "in [0, 1)"))
    }
}

/// `c(λ) = √((1 + λ) / (2 (1 − λ)))`.
pub fn c_lambda(lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(((1.0 + lambda) / (2.0 * (1.0 - lambda))).sqrt())
}

/// Threshold `ζ_σ(m, n) = (Q + 1/(σ√n)) · c(λ)^{1/((1−λ)n)}` above which the
/// tail theorem applies.
pub fn zeta(ctx: &BoundContext) -> Result<f64> {
    let c = c_lambda(ctx.lambda())?;
    Ok((ctx.q_value + ctx.noise_term()) * c.powf(1.0 / ctx.exponent()))
}

/// `z(ε) = (Q + √((2/n) ln(1/ε)) + 1/(σ√n)) · (c/ε)^{1/((1−λ)n)}`, for
/// `ε ∈ (0, 1]`. `z(1) = ζ` exactly and `z` decreases in `ε`.
pub fn z_of_eps(ctx: &BoundContext, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(domain("eps", eps, "in (0, 1]"));
    }
    let c = c_lambda(ctx.lambda())?;
    let dev = ((2.0 / ctx.n as f64) * (1.0 / eps).ln()).sqrt();
    Ok((ctx.q_value + dev + ctx.noise_term()) * (c / eps).powf(1.0 / ctx.exponent()))
}

/// Natural log of the tail theorem's right-hand side; see
/// [`theorem_tail_bound`].
pub fn theorem_tail_bound_ln(ctx: &BoundContext, z: f64) -> Result<f64> {
    if !(ctx.sigma <= 1.0) {
        return Err(domain("sigma", ctx.sigma, "in (0, 1] for the tail theorem"));
    }
    let zeta = zeta(ctx)?;
    if !(z >= zeta) {
        return Err(Error::BelowThreshold { z, zeta });
    }
    let c = c_lambda(ctx.lambda())?;
    let bracket = (ctx.q_value + (2.0 * (2.0 * z).ln()).sqrt() + ctx.noise_term()) / z;
    Ok(LN_2 + c.ln() + ctx.exponent() * bracket.ln())
}

/// Upper bound on `P{κ(A) >= e z / (1 − λ)}` for `A ~ N(Ā, σ² I)`,
/// `‖Ā‖ <= 1`, `0 < σ <= 1`, `z >= ζ`:
/// `2 c(λ) [(Q + √(2 ln 2z) + 1/(σ√n)) / z]^{(1−λ)n}`.
pub fn theorem_tail_bound(ctx: &BoundContext, z: f64) -> Result<f64> {
    theorem_tail_bound_ln(ctx, z).map(f64::exp)
}

/// `κ` threshold `e z / (1 − λ)` that [`theorem_tail_bound`] refers to.
pub fn theorem_kappa_threshold(ctx: &BoundContext, z: f64) -> f64 {
    E * z / (1.0 - ctx.lambda())
}

pub fn pinv_tail_bound_ln(ctx: &BoundContext, t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain("t", t, "finite and > 0"));
    }
    let c = c_lambda(ctx.lambda())?;
    Ok(c.ln() + ctx.exponent() * (E / (ctx.sigma * (ctx.n as f64).sqrt() * t)).ln())
}

/// Upper bound on `P{‖A†‖ >= t / (1 − λ)}`: `c(λ) (e / (σ √n t))^{(1−λ)n}`.
/// Holds for any center and any `σ > 0`.
pub fn pinv_tail_bound(ctx: &BoundContext, t: f64) -> Result<f64> {
    pinv_tail_bound_ln(ctx, t).map(f64::exp)
}

/// The `t` at which [`pinv_tail_bound`] equals `beta`.
pub fn pinv_tail_threshold(ctx: &BoundContext, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(domain("beta", beta, "finite and > 0"));
    }
    let c = c_lambda(ctx.lambda())?;
    Ok(E / (ctx.sigma * (ctx.n as f64).sqrt()) * (c / beta).powf(1.0 / ctx.exponent()))
}

fn check_directional(m: usize, n: usize, sigma: f64, xi: f64) -> Result<()> {
    if m == 0 || m > n {
        return Err(Error::Dimension(format!("need 1 <= m <= n, got {m}x{n}")));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(domain("sigma", sigma, "finite and > 0"));
    }
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(domain("xi", xi, "finite and > 0"));
    }
    Ok(())
}

/// Log of [`pinv_directional_tail_bound`].
pub fn pinv_directional_tail_bound_ln(m: usize, n: usize, sigma: f64, xi: f64) -> Result<f64> {
    check_directional(m, n, sigma, xi)?;
    let p = (n - m + 1) as f64;
    Ok(-0.5 * p * (2.0 * PI).ln() + ln_sphere_area(n - m) - p.ln() - p * (sigma * xi).ln())
}

/// Upper bound on `P{‖A† v‖ >= ξ}` for any unit `v` and any center:
/// `(2π)^{−p/2} · O_{n−m} / p · (σ ξ)^{−p}` with `p = n − m + 1`.
pub fn pinv_directional_tail_bound(m: usize, n: usize, sigma: f64, xi: f64) -> Result<f64> {
    pinv_directional_tail_bound_ln(m, n, sigma, xi).map(f64::exp)
}

/// The `ξ` at which [`pinv_directional_tail_bound`] equals `beta`.
pub fn pinv_directional_threshold(m: usize, n: usize, sigma: f64, beta: f64) -> Result<f64> {
    let at_one = pinv_directional_tail_bound_ln(m, n, sigma, 1.0)?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(domain("beta", beta, "finite and > 0"));
    }
    let p = (n - m + 1) as f64;
    Ok(((at_one - beta.ln()) / p).exp())
}

/// Lower and upper bounds on a probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sandwich {
    pub lower: f64,
    pub upper: f64,
}

/// Average-case sandwich for `P{κ(A) >= x / (1 − λ)}`, `A` standard
/// Gaussian, valid for `x >= n − m + 1`:
/// `(2π)^{-1/2} (1/(5x))^p <= P <= (2π)^{-1/2} (7/x)^p`, `p = n − m + 1`.
/// Both sides are clipped to `[0, 1]`.
pub fn chen_dongarra_bounds(m: usize, n: usize, x: f64) -> Result<Sandwich> {
    if m == 0 || m > n {
        return Err(Error::Dimension(format!("need 1 <= m <= n, got {m}x{n}")));
    }
    let p = (n - m + 1) as f64;
    if !(x >= p && x.is_finite()) {
        return Err(domain("x", x, "at least n - m + 1"));
    }
    let front = -0.5 * (2.0 * PI).ln();
    let lower = (front - p * (5.0 * x).ln()).exp();
    let upper = (front + p * (7.0 / x).ln()).exp();
    Ok(Sandwich {
        lower: lower.clamp(0.0, 1.0),
        upper: upper.clamp(0.0, 1.0),
    })
}

/// Almost-sure limit of `κ` for standard Gaussian `m × n`, `m/n → λ`:
/// `(1 + √λ) / (1 − √λ)`.
pub fn edelman_limit(lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let r = lambda.sqrt();
    Ok((1.0 + r) / (1.0 - r))
}

/// `lim Q(m_n, n) = 1 + √λ`. `λ = 1` is accepted as the continuous
/// extension at the endpoint.
pub fn q_limit(lambda: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(domain("lambda", lambda, "in [0, 1]"));
    }
    Ok(1.0 + lambda.sqrt())
}

/// Upper bound on `Q(m, n)` is capped at this value.
pub const Q_UPPER_CAP: f64 = 6.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

/// `√(n/(n+1)) <= Q(m, n) <= min(2 (1 + √(2 ln(2m − 1) / n) + 1/√n), 6)`
/// for `n > 1`. The cap only binds when `m` is large relative to `n`, so
/// `m > n` is accepted here.
pub fn q_analytic_bounds(m: usize, n: usize) -> Result<Interval> {
    if n <= 1 {
        return Err(domain("n", n as f64, "greater than 1"));
    }
    if m == 0 {
        return Err(Error::Dimension("need m >= 1".into()));
    }
    let nf = n as f64;
    let lower = (nf / (nf + 1.0)).sqrt();
    let upper = 2.0 * (1.0 + (2.0 * ((2 * m - 1) as f64).ln() / nf).sqrt() + 1.0 / nf.sqrt());
    Ok(Interval {
        lower,
        upper: upper.min(Q_UPPER_CAP),
    })
}

/// `20.1 / (1 − λ)`.
pub fn expectation_bound(lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(EXPECTATION_CONSTANT / (1.0 - lambda))
}

/// `ln(20.1 / (1 − λ))`, the bound on `E ln κ(A)` via Jensen.
pub fn ln_expectation_bound(lambda: f64) -> Result<f64> {
    expectation_bound(lambda).map(f64::ln)
}

/// `ln(m + σ m √(5n)) + ln(2.35 / σ) + √(eπ/5)`, the `r`-free part of
/// [`mu_cdw`].
pub fn mu_cdw_base(m: usize, n: usize, sigma: f64) -> f64 {
    let (mf, nf) = (m as f64, n as f64);
    (mf + sigma * mf * (5.0 * nf).sqrt()).ln() + (2.35 / sigma).ln() + (E * PI / 5.0).sqrt()
}

/// Earlier upper bound on `E ln κ(A)`:
/// `ln(m + σ m √(5n)) + ln(2.35/σ) + 1/r + √(eπ/5)`. `r` is an explicit
/// parameter.
pub fn mu_cdw(m: usize, n: usize, sigma: f64, r: f64) -> Result<f64> {
    if m == 0 || n == 0 {
        return Err(Error::Dimension(format!("need positive sizes, got {m}x{n}")));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(domain("sigma", sigma, "finite and > 0"));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(domain("r", r, "finite and > 0"));
    }
    Ok(mu_cdw_base(m, n, sigma) + 1.0 / r)
}

/// Digits lost solving a least-squares problem:
/// `log₁₀(m n^{3/2}) + 2 log₁₀ κ + offset`.
pub fn lop_bound(m: usize, n: usize, kappa: f64, offset: f64) -> Result<f64> {
    if !(n >= 1 && m > n) {
        return Err(Error::Dimension(format!(
            "loss of precision is stated for m > n >= 1, got {m}x{n}"
        )));
    }
    if !(kappa >= 1.0 && kappa.is_finite()) {
        return Err(domain("kappa", kappa, "finite and >= 1"));
    }
    let (mf, nf) = (m as f64, n as f64);
    Ok((mf * nf.powf(1.5)).log10() + 2.0 * kappa.log10() + offset)
}

fn check_eps_open(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(domain("eps", eps, "in (0, 1)"))
    }
}

/// `½ √κ |ln ε|`, iterations for an `ε`-accurate CG solve on an SPD matrix
/// with condition number `κ`.
pub fn cg_iteration_bound(kappa: f64, eps: f64) -> Result<f64> {
    if !(kappa >= 1.0 && kappa.is_finite()) {
        return Err(domain("kappa", kappa, "finite and >= 1"));
    }
    check_eps_open(eps)?;
    Ok(0.5 * kappa.sqrt() * eps.ln().abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CgCost {
    /// `3 n² · 20.1/(1 − λ) · |ln ε| + lower_order`.
    pub cost: f64,
    /// `e^{−n(1−λ)/91}`: accuracies at or above this are cheaper than
    /// Gaussian elimination's `⅔ n³`.
    pub breakeven_eps: f64,
}

/// Expected arithmetic cost of CG on `P = AAᵀ` and the break-even accuracy.
/// `lower_order` stands in for the unspecified `O(n)` term.
pub fn cg_cost_and_breakeven(n: usize, lambda: f64, eps: f64, lower_order: f64) -> Result<CgCost> {
    if n == 0 {
        return Err(domain("n", 0.0, "at least 1"));
    }
    check_lambda(lambda)?;
    check_eps_open(eps)?;
    let nf = n as f64;
    Ok(CgCost {
        cost: 3.0 * nf * nf * expectation_bound(lambda)? * eps.ln().abs() + lower_order,
        breakeven_eps: (-nf * (1.0 - lambda) / 91.0).exp(),
    })
}

/// Outcome of one analytic inequality checked on a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub name: String,
    pub grid_points: usize,
    /// Smallest `rhs − lhs` over the grid (for `lhs <= rhs`).
    pub worst_margin: f64,
    pub passed: bool,
}

fn grid_check(name: &str, points: impl Iterator<Item = (f64, f64)>) -> LemmaCheck {
    let mut count = 0;
    let mut worst = f64::INFINITY;
    for (lhs, rhs) in points {
        count += 1;
        let margin = rhs - lhs;
        if !(margin >= worst) {
            worst = margin;
        }
    }
    LemmaCheck {
        name: name.to_string(),
        grid_points: count,
        worst_margin: worst,
        passed: count > 0 && worst >= 0.0,
    }
}

/// Evaluates the elementary inequalities used by the tail bounds on dense
/// grids:
/// * `λ^{−λ/(1−λ)} <= e` for `λ ∈ (0, 1)`, step `10⁻³`;
/// * `√(2/m) <= Γ(m/2) / Γ((m+1)/2)` for `m = 1..=500`;
/// * `m / √(m+1) <= E‖Z‖ = √2 Γ((m+1)/2) / Γ(m/2)` for `m = 1..=500`;
/// * `√(2π/x) (x/e)^x < Γ(x)` for `x ∈ (0, 200]`, step `0.25`, in log form.
pub fn analytic_lemma_checks() -> Vec<LemmaCheck> {
    let lambda_grid = (1..1000).map(|k| k as f64 * 1e-3);
    let m_grid = || (1..=500usize).map(|m| m as f64);
    let x_grid = (1..=800).map(|k| k as f64 * 0.25);
    vec![
        grid_check(
            "lambda_power_le_e",
            lambda_grid.map(|l| (l.powf(-l / (1.0 - l)), E)),
        ),
        grid_check(
            "gamma_ratio_lower_bound",
            m_grid().map(|m| ((2.0 / m).sqrt(), (ln_gamma(0.5 * m) - ln_gamma(0.5 * (m + 1.0))).exp())),
        ),
        grid_check(
            "chi_mean_lower_bound",
            (1..=500usize).map(|m| (m as f64 / ((m + 1) as f64).sqrt(), expected_chi(m))),
        ),
        grid_check(
            "stirling_gamma_lower_bound",
            x_grid.map(|x| (0.5 * (2.0 * PI / x).ln() + x * (x.ln() - 1.0), ln_gamma(x))),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn ctx(m: usize, n: usize, sigma: f64, q: f64) -> BoundContext {
        BoundContext::new(m, n, sigma, LambdaMode::Theorem, q).unwrap()
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn c_lambda_values_and_domain() {
        assert!(close(c_lambda(0.0).unwrap(), std::f64::consts::FRAC_1_SQRT_2, 1e-15));
        assert!(close(c_lambda(1e-12).unwrap(), 0.707_106_8, 1e-7));
        assert!(close(c_lambda(0.5).unwrap(), 1.224_744_9, 1e-7));
        assert!(close(c_lambda(2.0 / 3.0).unwrap(), 1.581_138_8, 1e-7));
        assert!(c_lambda(1.0).is_err());
        assert!(c_lambda(-0.1).is_err());
        assert!(c_lambda(f64::NAN).is_err());
        let grid: Vec<f64> = (0..100).map(|k| c_lambda(k as f64 / 100.0).unwrap()).collect();
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn context_validation() {
        assert!(BoundContext::new(3, 2, 1.0, LambdaMode::Theorem, 1.0).is_err());
        assert!(BoundContext::new(0, 2, 1.0, LambdaMode::Theorem, 1.0).is_err());
        assert!(BoundContext::new(2, 2, 0.0, LambdaMode::Theorem, 1.0).is_err());
        assert!(BoundContext::new(2, 2, 1.0, LambdaMode::Theorem, 0.0).is_err());
        assert!(BoundContext::new(2, 2, 1.0, LambdaMode::Asymptotic, 1.0).is_err());
        assert!(BoundContext::new(2, 2, 1.0, LambdaMode::Theorem, 1.0).is_ok());
    }

    #[test]
    fn exponent_identity_in_theorem_mode() {
        for n in 1..60 {
            for m in 1..=n {
                let c = ctx(m, n, 1.0, 1.0);
                assert_eq!(c.exponent(), (n - m + 1) as f64);
                assert!(close((1.0 - c.lambda()) * n as f64, c.exponent(), 1e-12));
            }
        }
    }

    #[test]
    fn zeta_limits() {
        let c = ctx(20, 60, 1e9, 1.3);
        let expected = 1.3 * c_lambda(c.lambda()).unwrap().powf(1.0 / 41.0);
        assert!(close(zeta(&c).unwrap(), expected, 1e-9));
        let big = ctx(10, 1_000_000, 1.0, 1.3);
        assert!(close(zeta(&big).unwrap(), 1.3 + 1e-3, 1e-6));
        let sig: Vec<f64> = [0.1, 0.3, 0.7, 1.0]
            .iter()
            .map(|&s| zeta(&ctx(10, 15, s, 1.5)).unwrap())
            .collect();
        assert!(sig.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn z_of_eps_properties() {
        let c = ctx(10, 15, 0.5, 1.6);
        assert_eq!(z_of_eps(&c, 1.0).unwrap(), zeta(&c).unwrap());
        let zs: Vec<f64> = [1.0, 0.5, 0.1, 0.01]
            .iter()
            .map(|&e| z_of_eps(&c, e).unwrap())
            .collect();
        assert!(zs.windows(2).all(|w| w[0] < w[1]));
        assert!(z_of_eps(&c, 1e-12).unwrap() > 10.0 * zs[0]);
        assert!(z_of_eps(&c, 0.0).is_err());
        assert!(z_of_eps(&c, 1.5).is_err());
    }

    #[test]
    fn theorem_tail_bound_preconditions() {
        let c = ctx(10, 15, 1.0, 1.5);
        let z0 = zeta(&c).unwrap();
        assert!(matches!(
            theorem_tail_bound(&c, 0.5 * z0),
            Err(Error::BelowThreshold { .. })
        ));
        assert!(theorem_tail_bound(&c, z0).is_ok());
        let wide = ctx(10, 15, 2.0, 1.5);
        assert!(matches!(theorem_tail_bound(&wide, 10.0), Err(Error::Domain { .. })));
        let grid: Vec<f64> = (0..=40)
            .map(|k| theorem_tail_bound(&c, z0 * 100f64.powf(k as f64 / 40.0)).unwrap())
            .collect();
        assert!(grid.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn log_space_survives_large_exponents() {
        let c = ctx(1, 10_000, 1.0, 1.0);
        let ln = theorem_tail_bound_ln(&c, 50.0).unwrap();
        assert!(ln.is_finite() && ln < -1000.0);
        let ln = pinv_directional_tail_bound_ln(1, 10_000, 1e-3, 1e-3).unwrap();
        assert!(ln.is_finite() && ln > 1000.0);
        assert!(pinv_directional_tail_bound_ln(1, 10_000, 1.0, 1e3).unwrap().is_finite());
    }

    #[test]
    fn pinv_tail_bound_scaling() {
        let a = ctx(5, 12, 0.3, 1.0);
        let b = ctx(5, 12, 0.6, 1.0);
        let x = pinv_tail_bound(&a, 2.0).unwrap();
        let y = pinv_tail_bound(&b, 1.0).unwrap();
        assert!(close(x, y, 1e-15 * x));
        assert!(pinv_tail_bound(&a, 1e6).unwrap() < 1e-40);
        assert!(pinv_tail_bound(&a, 0.0).is_err());
        let t = pinv_tail_threshold(&a, 0.05).unwrap();
        assert!(close(pinv_tail_bound(&a, t).unwrap(), 0.05, 1e-12));
    }

    #[test]
    fn directional_bound_homogeneity() {
        let base = pinv_directional_tail_bound(3, 7, 0.4, 1.0).unwrap();
        let scaled = pinv_directional_tail_bound(3, 7, 0.4, 2.0).unwrap();
        assert!(close(scaled, base / 2f64.powi(5), 1e-15));
        let xi = pinv_directional_threshold(3, 7, 0.4, 0.02).unwrap();
        assert!(close(pinv_directional_tail_bound(3, 7, 0.4, xi).unwrap(), 0.02, 1e-14));
        assert!(pinv_directional_tail_bound(3, 7, 0.4, 0.0).is_err());
        assert!(pinv_directional_tail_bound(8, 7, 0.4, 1.0).is_err());
    }

    #[test]
    fn chen_dongarra_validity_and_ratio() {
        assert!(chen_dongarra_bounds(10, 12, 2.9).is_err());
        let s = chen_dongarra_bounds(10, 12, 30.0).unwrap();
        assert!(close(s.upper / s.lower, 35f64.powi(3), 1e-6 * 35f64.powi(3)));
        let s = chen_dongarra_bounds(4, 7, 7.0).unwrap();
        assert!(close(s.upper, 1.0 / (2.0 * PI).sqrt(), 1e-15));
        assert!(s.lower <= s.upper);
    }

    #[test]
    fn limits() {
        assert!(close(edelman_limit(0.25).unwrap(), 3.0, 1e-15));
        assert_eq!(edelman_limit(0.0).unwrap(), 1.0);
        assert!(close(edelman_limit(0.64).unwrap(), 9.0, 1e-13));
        assert!(edelman_limit(1.0).is_err());
        assert_eq!(q_limit(0.25).unwrap(), 1.5);
        assert_eq!(q_limit(0.0).unwrap(), 1.0);
        assert_eq!(q_limit(1.0).unwrap(), 2.0);
        assert!(q_limit(1.1).is_err());
    }

    #[test]
    fn q_bounds_cap_and_domain() {
        assert!(q_analytic_bounds(1, 1).is_err());
        // 2(1 + √(2 ln 3 / 2) + 1/√2) ≈ 5.51 stays under the cap;
        // 2(1 + √(2 ln 99 / 2) + 1/√2) ≈ 7.70 does not.
        assert!(q_analytic_bounds(2, 2).unwrap().upper < 6.0);
        assert_eq!(q_analytic_bounds(50, 2).unwrap().upper, 6.0);
        assert!(close(q_analytic_bounds(1, 15).unwrap().lower, 0.968_246, 1e-6));
        for n in 2..80 {
            for m in 1..=n {
                let i = q_analytic_bounds(m, n).unwrap();
                assert!(i.lower < i.upper && i.upper <= 6.0);
            }
        }
    }

    #[test]
    fn expectation_bound_values() {
        assert!(close(expectation_bound(0.5).unwrap(), 40.2, 1e-12));
        assert!(expectation_bound(1.0).is_err());
    }

    #[test]
    fn mu_is_decreasing_in_r() {
        let a = mu_cdw(10, 15, 0.3, 0.5).unwrap();
        let b = mu_cdw(10, 15, 0.3, 1.0).unwrap();
        assert!(a > b);
        assert!(mu_cdw(10, 15, 0.3, 0.0).is_err());
    }

    #[test]
    fn lop_examples() {
        assert!(close(lop_bound(1000, 100, 10.0, 0.0).unwrap(), 8.0, 1e-12));
        let base = lop_bound(50, 7, 1.0, 0.0).unwrap();
        assert!(close(base, (50.0 * 7f64.powf(1.5)).log10(), 1e-12));
        let d = lop_bound(50, 7, 6.0, 0.0).unwrap() - lop_bound(50, 7, 3.0, 0.0).unwrap();
        assert!(close(d, 2.0 * 2f64.log10(), 1e-12));
        assert!(lop_bound(7, 7, 2.0, 0.0).is_err());
        assert!(lop_bound(9, 7, 0.5, 0.0).is_err());
    }

    #[test]
    fn cg_bound_examples() {
        assert!(close(cg_iteration_bound(4.0, (-6f64).exp()).unwrap(), 6.0, 1e-12));
        assert!(close(cg_iteration_bound(1.0, 0.01).unwrap(), 0.5 * 100f64.ln(), 1e-12));
        let kp = edelman_limit(0.25).unwrap().powi(2);
        assert!(close(cg_iteration_bound(kp, (-1f64).exp()).unwrap(), 1.5, 1e-12));
        assert!(cg_iteration_bound(0.5, 0.1).is_err());
        assert!(cg_iteration_bound(2.0, 1.0).is_err());
    }

    #[test]
    fn lemma_checks_pass() {
        let checks = analytic_lemma_checks();
        assert_eq!(checks.len(), 4);
        for c in &checks {
            assert!(c.passed, "{c:?}");
        }
        assert_eq!(checks[0].grid_points, 999);
        assert_eq!(checks[3].grid_points, 800);
    }
}
