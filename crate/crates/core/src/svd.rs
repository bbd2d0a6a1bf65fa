//! Golub–Kahan singular value decomposition.
//!
//! A two-sided Householder sweep reduces the input to bidiagonal form, then
//! implicitly shifted QR steps (Wilkinson shift, bulge chasing) drive the
//! off-diagonal to zero. Inputs with more columns than rows are handled via
//! the transpose so the reduction always runs on a tall matrix.

use crate::error::{Error, Result};
use crate::matrix::{norm, Matrix};

/// Implicit QR sweeps allowed per singular value before giving up.
pub const MAX_SWEEPS_PER_VALUE: usize = 75;

/// Reconstruction / orthogonality tolerance for an `m × n` problem.
pub fn tol_svd(m: usize, n: usize) -> f64 {
    1e-10 * m.max(n) as f64
}

/// `A = U diag(σ) Vᵀ` with `U` of size `m × m` and `V` of size `n × n`.
#[derive(Clone, Debug)]
pub struct SvdFactors {
    pub left_vectors: Matrix,
    /// Non-increasing, length `min(m, n)`.
    pub singular_values: Vec<f64>,
    pub right_vectors: Matrix,
}

impl SvdFactors {
    pub fn reconstruct(&self) -> Matrix {
        let (m, n) = (self.left_vectors.rows(), self.right_vectors.rows());
        let mut us = self.left_vectors.clone();
        for i in 0..m {
            for j in 0..m {
                us[(i, j)] *= self.singular_values.get(j).copied().unwrap_or(0.0);
            }
        }
        let mut sigma_vt = Matrix::zeros(m, n);
        let vt = self.right_vectors.transpose();
        for i in 0..m.min(n) {
            for j in 0..n {
                sigma_vt[(i, j)] = vt[(i, j)];
            }
        }
        us.matmul(&sigma_vt)
    }
}

/// Lower bidiagonal `m × n` matrix (`m <= n`): `diagonal` on the main
/// diagonal, `subdiagonal` just below it, zero elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct BidiagonalForm {
    diagonal: Vec<f64>,
    subdiagonal: Vec<f64>,
    cols: usize,
}

impl BidiagonalForm {
    pub fn new(diagonal: Vec<f64>, subdiagonal: Vec<f64>, cols: usize) -> Result<Self> {
        let m = diagonal.len();
        if m == 0 || subdiagonal.len() + 1 != m || cols < m {
            return Err(Error::Dimension(format!(
                "bidiagonal form needs diagonal of length m >= 1, subdiagonal of length m-1 and cols >= m; got {}, {}, {}",
                m,
                subdiagonal.len(),
                cols
            )));
        }
        if diagonal.iter().chain(&subdiagonal).any(|x| !x.is_finite()) {
            return Err(Error::Parse("non-finite bidiagonal entry".into()));
        }
        Ok(Self {
            diagonal,
            subdiagonal,
            cols,
        })
    }

    pub fn rows(&self) -> usize {
        self.diagonal.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn subdiagonal(&self) -> &[f64] {
        &self.subdiagonal
    }

    pub fn to_matrix(&self) -> Matrix {
        let mut y = Matrix::zeros(self.rows(), self.cols);
        for (i, &v) in self.diagonal.iter().enumerate() {
            y[(i, i)] = v;
        }
        for (i, &w) in self.subdiagonal.iter().enumerate() {
            y[(i + 1, i)] = w;
        }
        y
    }

    /// Singular values, non-increasing.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        // Yᵀ restricted to its leading m columns is upper bidiagonal with the
        // same diagonal and the subdiagonal moved above it.
        let mut d = self.diagonal.clone();
        let mut e = self.subdiagonal.clone();
        bidiagonal_qr(&mut d, &mut e, None, None)?;
        let mut s: Vec<f64> = d.into_iter().map(f64::abs).collect();
        s.sort_by(|a, b| b.total_cmp(a));
        Ok(s)
    }

    pub fn spectral_norm(&self) -> Result<f64> {
        Ok(self.singular_values()?[0])
    }
}

/// Two-sided Householder reduction of `A` (`m <= n`) to the lower bidiagonal
/// form with nonnegative entries.
pub fn bidiagonalize(a: &Matrix) -> Result<BidiagonalForm> {
    let (m, n) = a.shape();
    if m > n {
        return Err(Error::Dimension(format!(
            "bidiagonalize needs rows <= cols, got {m}x{n}; transpose first"
        )));
    }
    let mut work = a.transpose();
    let (d, e) = householder_bidiagonalize(&mut work, None, None);
    BidiagonalForm::new(
        d.into_iter().map(f64::abs).collect(),
        e.into_iter().map(f64::abs).collect(),
        n,
    )
}

/// Full SVD.
pub fn svd(a: &Matrix) -> Result<SvdFactors> {
    let (m, n) = a.shape();
    let mut f = if m < n {
        let t = svd_tall(&a.transpose())?;
        SvdFactors {
            left_vectors: t.right_vectors,
            singular_values: t.singular_values,
            right_vectors: t.left_vectors,
        }
    } else {
        svd_tall(a)?
    };
    // Sign convention: first nonzero coordinate of each left vector positive.
    for k in 0..m {
        if first_nonzero_negative(&f.left_vectors, k) {
            for r in 0..m {
                f.left_vectors[(r, k)] = -f.left_vectors[(r, k)];
            }
            if k < n {
                for r in 0..n {
                    f.right_vectors[(r, k)] = -f.right_vectors[(r, k)];
                }
            }
        }
    }
    Ok(f)
}

/// Singular values only, non-increasing.
pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    let mut work = if a.rows() >= a.cols() {
        a.clone()
    } else {
        a.transpose()
    };
    let (mut d, mut e) = householder_bidiagonalize(&mut work, None, None);
    bidiagonal_qr(&mut d, &mut e, None, None)?;
    let mut s: Vec<f64> = d.into_iter().map(f64::abs).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// `‖A‖ = σ_max`.
pub fn spectral_norm(a: &Matrix) -> Result<f64> {
    Ok(singular_values(a)?[0])
}

fn svd_tall(a: &Matrix) -> Result<SvdFactors> {
    let (m, n) = a.shape();
    let mut work = a.clone();
    let mut u = Matrix::identity(m);
    let mut v = Matrix::identity(n);
    let (mut d, mut e) = householder_bidiagonalize(&mut work, Some(&mut u), Some(&mut v));
    bidiagonal_qr(&mut d, &mut e, Some(&mut u), Some(&mut v))?;

    for (k, dk) in d.iter_mut().enumerate() {
        if *dk < 0.0 {
            *dk = -*dk;
            for r in 0..n {
                v[(r, k)] = -v[(r, k)];
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].total_cmp(&d[i]).then(i.cmp(&j)));
    let singular_values: Vec<f64> = order.iter().map(|&k| d[k]).collect();
    let mut left = Matrix::zeros(m, m);
    let mut right = Matrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for r in 0..m {
            left[(r, new)] = u[(r, old)];
        }
        for r in 0..n {
            right[(r, new)] = v[(r, old)];
        }
    }
    for k in n..m {
        for r in 0..m {
            left[(r, k)] = u[(r, k)];
        }
    }

    Ok(SvdFactors {
        left_vectors: left,
        singular_values,
        right_vectors: right,
    })
}

fn first_nonzero_negative(q: &Matrix, col: usize) -> bool {
    (0..q.rows())
        .map(|r| q[(r, col)])
        .find(|x| x.abs() > 1e-12)
        .is_some_and(|x| x < 0.0)
}

/// Reduces a tall `a` (`m >= n`) in place to upper bidiagonal form
/// `a = U B Vᵀ`. Returns `(diagonal, superdiagonal)`; reflections are
/// accumulated into `u` (`m × m`) and `v` (`n × n`) when given.
fn householder_bidiagonalize(
    a: &mut Matrix,
    mut u: Option<&mut Matrix>,
    mut v: Option<&mut Matrix>,
) -> (Vec<f64>, Vec<f64>) {
    let (m, n) = a.shape();
    debug_assert!(m >= n);
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    let mut x = Vec::with_capacity(m);

    for k in 0..n {
        x.clear();
        x.extend((k..m).map(|i| a[(i, k)]));
        if let Some((hv, beta, alpha)) = householder(&x) {
            for j in k..n {
                let s: f64 = hv.iter().enumerate().map(|(i, h)| h * a[(k + i, j)]).sum();
                let f = beta * s;
                for (i, h) in hv.iter().enumerate() {
                    a[(k + i, j)] -= f * h;
                }
            }
            if let Some(u) = u.as_deref_mut() {
                apply_right(u, k, &hv, beta);
            }
            a[(k, k)] = alpha;
            for i in k + 1..m {
                a[(i, k)] = 0.0;
            }
        }
        d[k] = a[(k, k)];

        if k + 1 < n {
            x.clear();
            x.extend((k + 1..n).map(|j| a[(k, j)]));
            if let Some((hv, beta, alpha)) = householder(&x) {
                for i in k..m {
                    let s: f64 = hv.iter().enumerate().map(|(j, h)| h * a[(i, k + 1 + j)]).sum();
                    let f = beta * s;
                    for (j, h) in hv.iter().enumerate() {
                        a[(i, k + 1 + j)] -= f * h;
                    }
                }
                if let Some(v) = v.as_deref_mut() {
                    apply_right(v, k + 1, &hv, beta);
                }
                a[(k, k + 1)] = alpha;
                for j in k + 2..n {
                    a[(k, j)] = 0.0;
                }
            }
            e[k] = a[(k, k + 1)];
        }
    }
    (d, e)
}

/// Reflector `H = I - beta h hᵀ` with `H x = alpha e₁`; `None` when `x` is
/// already a multiple of `e₁`.
fn householder(x: &[f64]) -> Option<(Vec<f64>, f64, f64)> {
    let tail = norm(&x[1..]);
    if tail == 0.0 {
        return None;
    }
    // Work on x / max|x| so that hᵀh neither underflows nor overflows.
    let scale = x.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let mut h: Vec<f64> = x.iter().map(|t| t / scale).collect();
    let nx = norm(&h);
    let alpha = if h[0] >= 0.0 { -nx } else { nx };
    h[0] -= alpha;
    let hh: f64 = h.iter().map(|t| t * t).sum();
    Some((h, 2.0 / hh, alpha * scale))
}

/// `Q ← Q H` for a reflector acting on columns `offset..`.
fn apply_right(q: &mut Matrix, offset: usize, h: &[f64], beta: f64) {
    for r in 0..q.rows() {
        let s: f64 = h.iter().enumerate().map(|(i, hi)| hi * q[(r, offset + i)]).sum();
        let f = beta * s;
        for (i, hi) in h.iter().enumerate() {
            q[(r, offset + i)] -= f * hi;
        }
    }
}

fn givens(y: f64, z: f64) -> (f64, f64, f64) {
    if z == 0.0 {
        return (1.0, 0.0, y);
    }
    let r = y.hypot(z);
    (y / r, z / r, r)
}

/// Columns `p, q` of `m` become `(c p + s q, -s p + c q)`.
fn rotate_cols(m: Option<&mut Matrix>, p: usize, q: usize, c: f64, s: f64) {
    if let Some(m) = m {
        for r in 0..m.rows() {
            let (a, b) = (m[(r, p)], m[(r, q)]);
            m[(r, p)] = c * a + s * b;
            m[(r, q)] = -s * a + c * b;
        }
    }
}

/// Diagonalizes the upper bidiagonal `(d, e)` in place. Rotations are
/// accumulated into the leading `d.len()` columns of `u` and into `v`.
fn bidiagonal_qr(
    d: &mut [f64],
    e: &mut [f64],
    mut u: Option<&mut Matrix>,
    mut v: Option<&mut Matrix>,
) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    let scale = d.iter().chain(e.iter()).fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return Ok(());
    }
    d.iter_mut().chain(e.iter_mut()).for_each(|x| *x /= scale);

    let eps = f64::EPSILON;
    let tiny = eps * d.iter().chain(e.iter()).fold(0.0f64, |m, x| m.max(x.abs()));
    let max_sweeps = MAX_SWEEPS_PER_VALUE * n;
    let mut sweeps = 0;
    let mut hi = n - 1;

    let negligible =
        |d: &[f64], e: &[f64], k: usize| e[k].abs() <= eps * (d[k].abs() + d[k + 1].abs()) || e[k].abs() <= tiny * eps;

    while hi > 0 {
        if negligible(d, e, hi - 1) {
            e[hi - 1] = 0.0;
            hi -= 1;
            continue;
        }
        let mut lo = hi - 1;
        while lo > 0 {
            if negligible(d, e, lo - 1) {
                e[lo - 1] = 0.0;
                break;
            }
            lo -= 1;
        }

        if let Some(i) = (lo..=hi).find(|&i| d[i].abs() <= tiny) {
            d[i] = 0.0;
            if i < hi {
                // Zero row i's superdiagonal with left rotations against rows below.
                let mut f = e[i];
                e[i] = 0.0;
                for j in i + 1..=hi {
                    let (c, s, r) = givens(d[j], f);
                    d[j] = r;
                    if j < hi {
                        f = -s * e[j];
                        e[j] *= c;
                    }
                    rotate_cols(u.as_deref_mut(), i, j, c, -s);
                }
            } else {
                // Zero column hi's superdiagonal with right rotations.
                let mut f = e[hi - 1];
                e[hi - 1] = 0.0;
                for j in (lo..hi).rev() {
                    let (c, s, r) = givens(d[j], f);
                    d[j] = r;
                    if j > lo {
                        f = -s * e[j - 1];
                        e[j - 1] *= c;
                    }
                    rotate_cols(v.as_deref_mut(), j, hi, c, s);
                }
            }
            continue;
        }

        sweeps += 1;
        if sweeps > max_sweeps {
            return Err(Error::NoConvergence { sweeps: max_sweeps });
        }
        golub_kahan_step(d, e, lo, hi, u.as_deref_mut(), v.as_deref_mut());
    }

    d.iter_mut().for_each(|x| *x *= scale);
    Ok(())
}

fn golub_kahan_step(
    d: &mut [f64],
    e: &mut [f64],
    lo: usize,
    hi: usize,
    mut u: Option<&mut Matrix>,
    mut v: Option<&mut Matrix>,
) {
    // Wilkinson shift from the trailing 2×2 block of BᵀB.
    let dm = d[hi - 1];
    let dn = d[hi];
    let em = e[hi - 1];
    let el = if hi - 1 > lo { e[hi - 2] } else { 0.0 };
    let a = dm * dm + el * el;
    let b = dm * em;
    let c = dn * dn + em * em;
    let mu = if b == 0.0 {
        c
    } else {
        let delta = 0.5 * (a - c);
        let sgn = if delta >= 0.0 { 1.0 } else { -1.0 };
        c - b * b / (delta + sgn * delta.hypot(b))
    };

    let mut y = d[lo] * d[lo] - mu;
    let mut z = d[lo] * e[lo];
    for k in lo..hi {
        let (c, s, r) = givens(y, z);
        if k > lo {
            e[k - 1] = r;
        }
        let (dk, ek) = (d[k], e[k]);
        d[k] = c * dk + s * ek;
        e[k] = -s * dk + c * ek;
        let bulge = s * d[k + 1];
        d[k + 1] *= c;
        rotate_cols(v.as_deref_mut(), k, k + 1, c, s);

        let (c, s, r) = givens(d[k], bulge);
        d[k] = r;
        let (ek, dk1) = (e[k], d[k + 1]);
        e[k] = c * ek + s * dk1;
        d[k + 1] = -s * ek + c * dk1;
        if k + 1 < hi {
            z = s * e[k + 1];
            e[k + 1] *= c;
            y = e[k];
        }
        rotate_cols(u.as_deref_mut(), k, k + 1, c, s);
    }
}
