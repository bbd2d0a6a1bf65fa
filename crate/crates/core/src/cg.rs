//! Conjugate gradients for symmetric positive-definite systems, with the
//! iteration and cost accounting used to test the complexity estimates for
//! `P = A Aᵀ`.

use serde::{Deserialize, Serialize};

use crate::bounds::{cg_iteration_bound, LambdaMode, EXPECTATION_CONSTANT};
use crate::error::{domain, Error, Result};
use crate::experiments::{par_trials, Verdict};
use crate::matrix::{dot, norm, Matrix};
use crate::sampling::{GaussianEnsemble, Seed};
use crate::stats::mean_and_se;
use crate::svd::singular_values;

/// Relative asymmetry tolerated in the system matrix.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Leading arithmetic cost of one iteration, in units of `dim²`.
pub const OPS_PER_ITERATION: f64 = 6.0;

#[derive(Clone, Debug, Default)]
pub struct CgOptions {
    /// Estimate of `κ(P)`. When present the stopping rule tightens the
    /// residual target to `ε / √κ`.
    pub kappa_estimate: Option<f64>,
    /// Defaults to `4 · dim`.
    pub max_iter: Option<usize>,
    /// Known solution, used only to report the relative error.
    pub x_true: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CgRunStats {
    pub iterations: usize,
    /// `‖c − P x_k‖ / ‖c‖` for `k = 0, 1, …` (recurrence residuals).
    pub residual_history: Vec<f64>,
    /// `½ x_kᵀ P x_k − cᵀ x_k`, which CG decreases monotonically.
    pub energy_history: Vec<f64>,
    /// Residual target the run stopped against.
    pub residual_target: f64,
    pub converged: bool,
    /// `iterations · 6 · dim²`.
    pub cost_estimate: f64,
    pub relative_error: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct CgSolution {
    pub x: Vec<f64>,
    pub stats: CgRunStats,
}

fn check_symmetric(p: &Matrix) -> Result<()> {
    let (m, n) = p.shape();
    if m != n {
        return Err(Error::Dimension(format!("system matrix must be square, got {m}x{n}")));
    }
    let scale = p.max_abs();
    let mut worst = 0.0f64;
    for i in 0..m {
        for j in 0..i {
            worst = worst.max((p[(i, j)] - p[(j, i)]).abs());
        }
    }
    let rel = if scale > 0.0 { worst / scale } else { 0.0 };
    if rel > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(rel));
    }
    Ok(())
}

/// Solves `P x = c` by Hestenes–Stiefel conjugate gradients from `x = 0`.
///
/// Stops once the relative residual is at most `ε / √κ_est` (or `ε` without
/// an estimate). Hitting `max_iter` is not an error: the partial iterate is
/// returned with `converged = false`. Non-positive curvature `pᵀPp <= 0`
/// means `P` is not positive definite and is an error.
pub fn cg_solve(p: &Matrix, c: &[f64], eps: f64, opts: &CgOptions) -> Result<CgSolution> {
    check_symmetric(p)?;
    let dim = p.rows();
    if c.len() != dim {
        return Err(Error::Dimension(format!(
            "right-hand side has length {}, expected {dim}",
            c.len()
        )));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(domain("eps", eps, "in (0, 1)"));
    }
    let target = match opts.kappa_estimate {
        Some(k) if k >= 1.0 && k.is_finite() => eps / k.sqrt(),
        Some(k) => return Err(domain("kappa_estimate", k, "finite and >= 1")),
        None => eps,
    };
    let max_iter = opts.max_iter.unwrap_or(4 * dim);

    let c_norm = norm(c);
    let mut x = vec![0.0; dim];
    let mut stats = CgRunStats {
        iterations: 0,
        residual_history: Vec::new(),
        energy_history: Vec::new(),
        residual_target: target,
        converged: false,
        cost_estimate: 0.0,
        relative_error: None,
    };
    if c_norm == 0.0 {
        stats.converged = true;
        stats.relative_error = opts.x_true.as_ref().map(|t| norm(t));
        return Ok(CgSolution { x, stats });
    }

    let mut r = c.to_vec();
    let mut dir = r.clone();
    let mut rs = dot(&r, &r);
    stats.residual_history.push(1.0);
    stats.energy_history.push(0.0);
    loop {
        let rel = rs.sqrt() / c_norm;
        if rel <= target {
            stats.converged = true;
            break;
        }
        if stats.iterations >= max_iter {
            break;
        }
        let pd = p.matvec(&dir);
        let curvature = dot(&dir, &pd);
        if curvature <= 0.0 {
            return Err(Error::Indefinite(curvature));
        }
        let alpha = rs / curvature;
        for i in 0..dim {
            x[i] += alpha * dir[i];
            r[i] -= alpha * pd[i];
        }
        let rs_next = dot(&r, &r);
        stats.iterations += 1;
        stats.residual_history.push(rs_next.sqrt() / c_norm);
        // ½ xᵀPx − cᵀx = −½ xᵀ(c + r) with r = c − Px.
        let energy = -0.5 * x.iter().zip(c.iter().zip(&r)).map(|(xi, (ci, ri))| xi * (ci + ri)).sum::<f64>();
        stats.energy_history.push(energy);
        if rs_next == 0.0 {
            stats.converged = true;
            break;
        }
        let beta = rs_next / rs;
        for i in 0..dim {
            dir[i] = r[i] + beta * dir[i];
        }
        rs = rs_next;
    }
    stats.cost_estimate = stats.iterations as f64 * OPS_PER_ITERATION * (dim * dim) as f64;
    stats.relative_error = opts.x_true.as_ref().map(|t| {
        let diff: Vec<f64> = x.iter().zip(t).map(|(a, b)| a - b).collect();
        norm(&diff) / norm(t)
    });
    Ok(CgSolution { x, stats })
}

/// One sampled system `A Aᵀ x = c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CgTrial {
    pub trial_index: u64,
    pub kappa_a: f64,
    /// `√κ(A Aᵀ)`, computed from the spectrum of `P` itself.
    pub sqrt_kappa_p: f64,
    pub identity_error: f64,
    pub iterations: usize,
    /// `½ √κ(P) |ln ε|`.
    pub iteration_bound: f64,
    pub converged: bool,
    pub cost_estimate: f64,
    pub relative_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CgExperiment {
    pub m: usize,
    pub n: usize,
    pub sigma: f64,
    pub eps: f64,
    pub lambda_mode: LambdaMode,
    pub lambda: f64,
    pub trials: Vec<CgTrial>,
    pub mean_iterations: f64,
    pub standard_error: f64,
    /// `½ (20.1 / (1 − λ)) |ln ε|`.
    pub expected_iterations_estimate: f64,
    pub verdicts: Vec<Verdict>,
}

impl CgExperiment {
    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }
}

/// Minimum trial count for [`cg_experiment`].
pub const MIN_CG_TRIALS: usize = 10;
/// Relative tolerance on `√κ(A Aᵀ) = κ(A)`.
pub const IDENTITY_TOL: f64 = 1e-8;

/// Samples `A` from `e`, solves `A Aᵀ x = A Aᵀ x*` for a Gaussian `x*`, and
/// compares iteration counts against the expected-iteration estimate.
pub fn cg_experiment(
    e: &GaussianEnsemble,
    eps: f64,
    trials: usize,
    seed: Seed,
    lambda_mode: LambdaMode,
) -> Result<CgExperiment> {
    if trials < MIN_CG_TRIALS {
        return Err(domain("trials", trials as f64, "at least 10"));
    }
    let (m, n) = (e.rows(), e.cols());
    if m > n {
        return Err(Error::Dimension(format!("need m <= n, got {m}x{n}")));
    }
    let lambda = lambda_mode.lambda(m, n);
    let expected = 0.5 * EXPECTATION_CONSTANT / (1.0 - lambda) * eps.ln().abs();
    let rows = par_trials(trials, seed, |i, s| {
        let mut st = s.stream();
        let a = st.gaussian_matrix(e);
        let x_true = st.normals(m);
        let p = a.gram();
        let sa = singular_values(&a)?;
        let sp = singular_values(&p)?;
        let kappa_a = sa[0] / sa[m - 1];
        let sqrt_kappa_p = (sp[0] / sp[m - 1]).sqrt();
        let c = p.matvec(&x_true);
        let sol = cg_solve(
            &p,
            &c,
            eps,
            &CgOptions {
                kappa_estimate: Some(kappa_a * kappa_a),
                max_iter: None,
                x_true: Some(x_true),
            },
        )?;
        Ok(CgTrial {
            trial_index: i,
            kappa_a,
            sqrt_kappa_p,
            identity_error: (sqrt_kappa_p - kappa_a).abs() / kappa_a,
            iterations: sol.stats.iterations,
            iteration_bound: cg_iteration_bound(sqrt_kappa_p * sqrt_kappa_p, eps)?,
            converged: sol.stats.converged,
            cost_estimate: sol.stats.cost_estimate,
            relative_error: sol.stats.relative_error.unwrap_or(f64::NAN),
        })
    })?;
    let iters: Vec<f64> = rows.iter().map(|t| t.iterations as f64).collect();
    let est = mean_and_se(&iters);
    let worst_identity = rows.iter().map(|t| t.identity_error).fold(0.0, f64::max);
    let unconverged = rows.iter().filter(|t| !t.converged).count();
    let verdicts = vec![
        Verdict::within(
            "sqrt_kappa_gram_identity",
            "max |sqrt(kappa(A A^T)) - kappa(A)| / kappa(A) <= 1e-8",
            worst_identity,
            IDENTITY_TOL,
        ),
        Verdict::le(
            format!("cg_mean_iterations m={m} n={n}"),
            "mean iterations <= (1/2) (20.1/(1-lambda)) |ln eps|",
            est.mean,
            expected,
            3.0 * est.standard_error,
        ),
        Verdict::within("cg_converged", "unconverged runs <= 0", unconverged as f64, 0.0),
    ];
    Ok(CgExperiment {
        m,
        n,
        sigma: e.sigma(),
        eps,
        lambda_mode,
        lambda,
        trials: rows,
        mean_iterations: est.mean,
        standard_error: est.standard_error,
        expected_iterations_estimate: expected,
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(d: &[f64]) -> Matrix {
        Matrix::from_fn(d.len(), d.len(), |i, j| if i == j { d[i] } else { 0.0 })
    }

    #[test]
    fn identity_converges_in_one_step() {
        let sol = cg_solve(&Matrix::identity(5), &[1.0, -2.0, 3.0, 0.5, 4.0], 1e-12, &CgOptions::default()).unwrap();
        assert_eq!(sol.stats.iterations, 1);
        assert!(sol.stats.converged);
        assert_eq!(sol.x, vec![1.0, -2.0, 3.0, 0.5, 4.0]);
        assert_eq!(sol.stats.cost_estimate, 6.0 * 25.0);
    }

    #[test]
    fn diagonal_three_distinct() {
        let sol = cg_solve(&diag(&[1.0, 2.0, 3.0]), &[1.0; 3], 1e-12, &CgOptions::default()).unwrap();
        assert!(sol.stats.iterations <= 3);
        for (x, want) in sol.x.iter().zip([1.0, 0.5, 1.0 / 3.0]) {
            assert!((x - want).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let asym = Matrix::from_rows(&[vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(cg_solve(&asym, &[1.0, 1.0], 0.1, &CgOptions::default()), Err(Error::NotSymmetric(_))));
        assert!(matches!(
            cg_solve(&diag(&[1.0, -1.0]), &[0.0, 1.0], 0.1, &CgOptions::default()),
            Err(Error::Indefinite(_))
        ));
        assert!(cg_solve(&diag(&[1.0]), &[1.0], 1.0, &CgOptions::default()).is_err());
        assert!(cg_solve(&diag(&[1.0]), &[1.0, 2.0], 0.5, &CgOptions::default()).is_err());
    }

    #[test]
    fn max_iter_returns_partial_result() {
        let d: Vec<f64> = (1..=20).map(f64::from).collect();
        let opts = CgOptions {
            max_iter: Some(2),
            ..CgOptions::default()
        };
        let sol = cg_solve(&diag(&d), &[1.0; 20], 1e-12, &opts).unwrap();
        assert!(!sol.stats.converged);
        assert_eq!(sol.stats.iterations, 2);
        assert_eq!(sol.stats.residual_history.len(), 3);
    }

    #[test]
    fn zero_rhs() {
        let sol = cg_solve(&diag(&[2.0, 3.0]), &[0.0, 0.0], 0.5, &CgOptions::default()).unwrap();
        assert_eq!(sol.x, vec![0.0, 0.0]);
        assert!(sol.stats.converged);
        assert_eq!(sol.stats.iterations, 0);
    }
}
