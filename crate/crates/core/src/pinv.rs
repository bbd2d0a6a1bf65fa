//! Moore–Penrose inverse, condition number, least-squares and minimum-norm
//! solves, and the geometric quantities behind the tail bounds for `‖A†‖`.

use crate::error::{Error, Result};
use crate::matrix::{dot, norm, Matrix};
use crate::svd::{singular_values, svd, tol_svd, SvdFactors};

/// `σ_min <= rank_tol · σ_max` counts as rank deficient.
pub fn rank_tol(m: usize, n: usize) -> f64 {
    1e-12 * m.max(n) as f64
}

/// Tolerance for the Moore–Penrose identities, scaled by `κ(A)`.
pub fn tol_mp(kappa: f64) -> f64 {
    1e-8 * kappa.max(1.0)
}

fn check_full_rank(s: &[f64], m: usize, n: usize) -> Result<()> {
    let sigma_max = s[0];
    let sigma_min = *s.last().expect("nonempty spectrum");
    if sigma_max == 0.0 || sigma_min <= rank_tol(m, n) * sigma_max {
        return Err(Error::RankDeficient {
            sigma_min,
            sigma_max,
        });
    }
    Ok(())
}

fn full_rank_svd(a: &Matrix) -> Result<SvdFactors> {
    let f = svd(a)?;
    check_full_rank(&f.singular_values, a.rows(), a.cols())?;
    Ok(f)
}

/// `A† = V Σ⁻¹ Uᵀ`, an `n × m` matrix. Requires full rank `min(m, n)`.
pub fn pseudo_inverse(a: &Matrix) -> Result<Matrix> {
    let f = full_rank_svd(a)?;
    Ok(pinv_from_factors(&f, a.rows(), a.cols()))
}

fn pinv_from_factors(f: &SvdFactors, m: usize, n: usize) -> Matrix {
    let k = m.min(n);
    let mut out = Matrix::zeros(n, m);
    for (r, &s) in f.singular_values.iter().enumerate().take(k) {
        let inv = 1.0 / s;
        for i in 0..n {
            let vi = f.right_vectors[(i, r)] * inv;
            if vi == 0.0 {
                continue;
            }
            for j in 0..m {
                out[(i, j)] += vi * f.left_vectors[(j, r)];
            }
        }
    }
    out
}

/// `κ(A) = ‖A‖ ‖A†‖ = σ_max / σ_min`.
pub fn condition_number(a: &Matrix) -> Result<f64> {
    let s = singular_values(a)?;
    check_full_rank(&s, a.rows(), a.cols())?;
    Ok(s[0] / s[s.len() - 1])
}

/// Relative residuals of the four Moore–Penrose identities:
/// `AXA = A`, `XAX = X`, `(AX)ᵀ = AX`, `(XA)ᵀ = XA`.
pub fn moore_penrose_residuals(a: &Matrix, x: &Matrix) -> [f64; 4] {
    let ax = a.matmul(x);
    let xa = x.matmul(a);
    let rel = |d: Matrix, scale: f64| d.frobenius_norm() / scale.max(f64::MIN_POSITIVE);
    [
        rel(ax.matmul(a).sub(a), a.frobenius_norm()),
        rel(xa.matmul(x).sub(x), x.frobenius_norm()),
        rel(ax.transpose().sub(&ax), ax.frobenius_norm()),
        rel(xa.transpose().sub(&xa), xa.frobenius_norm()),
    ]
}

fn apply_pinv(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let (m, n) = a.shape();
    if b.len() != m {
        return Err(Error::Dimension(format!(
            "right-hand side has length {}, expected {m}",
            b.len()
        )));
    }
    let f = full_rank_svd(a)?;
    let k = m.min(n);
    let mut x = vec![0.0; n];
    for r in 0..k {
        let coef = (0..m).map(|j| f.left_vectors[(j, r)] * b[j]).sum::<f64>() / f.singular_values[r];
        for (i, xi) in x.iter_mut().enumerate() {
            *xi += coef * f.right_vectors[(i, r)];
        }
    }
    Ok(x)
}

/// `argmin ‖Ax − b‖` for an overdetermined full-column-rank system (`m > n`).
pub fn solve_least_squares(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    if a.rows() <= a.cols() {
        return Err(Error::Dimension(format!(
            "least squares needs more rows than columns, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    apply_pinv(a, b)
}

/// Minimum-norm solution of `Ax = b` for an underdetermined full-row-rank
/// system (`m < n`).
pub fn solve_min_norm(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    if a.rows() >= a.cols() {
        return Err(Error::Dimension(format!(
            "minimum-norm solve needs fewer rows than columns, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    apply_pinv(a, b)
}

/// Component of the last row orthogonal to the span of the other rows.
#[derive(Clone, Debug)]
pub struct RowComplement {
    pub vector: Vec<f64>,
    pub norm: f64,
}

/// Projects the last row of `A` (`m <= n`) onto the orthogonal complement of
/// the span of rows `1..m-1`, using Gram–Schmidt with one reorthogonalization
/// pass. For full-rank `A`, `‖A† e_m‖ = 1 / norm`.
pub fn row_complement(a: &Matrix) -> Result<RowComplement> {
    let (m, n) = a.shape();
    if m > n {
        return Err(Error::Dimension(format!(
            "row complement needs rows <= cols, got {m}x{n}"
        )));
    }
    let dep_tol = 1e-12 * n as f64;
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m.saturating_sub(1));
    for i in 0..m - 1 {
        let row = a.row(i);
        let mut q = row.to_vec();
        project_out(&mut q, &basis);
        let qn = norm(&q);
        if qn <= dep_tol * norm(row) || qn == 0.0 {
            return Err(Error::DegenerateSpan {
                rows: m - 1,
                residual: qn,
            });
        }
        q.iter_mut().for_each(|x| *x /= qn);
        basis.push(q);
    }
    let mut perp = a.row(m - 1).to_vec();
    project_out(&mut perp, &basis);
    let nrm = norm(&perp);
    Ok(RowComplement {
        vector: perp,
        norm: nrm,
    })
}

fn project_out(v: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, v);
            v.iter_mut().zip(q).for_each(|(x, qi)| *x -= c * qi);
        }
    }
}

/// Unit vector `u_A` with `‖A† u_A‖ = ‖A†‖`.
#[derive(Clone, Debug)]
pub struct SharpestDirection {
    pub vector: Vec<f64>,
    /// The smallest singular value is repeated (within `tol_svd`), so the
    /// direction is not unique.
    pub ambiguous: bool,
}

/// Left singular vector of the smallest singular value (`m <= n`), first
/// nonzero coordinate positive.
pub fn sharpest_direction(a: &Matrix) -> Result<SharpestDirection> {
    let (m, n) = a.shape();
    if m > n {
        return Err(Error::Dimension(format!(
            "sharpest direction needs rows <= cols, got {m}x{n}"
        )));
    }
    let f = full_rank_svd(a)?;
    let s = &f.singular_values;
    let ambiguous = m > 1 && (s[m - 2] - s[m - 1]) <= tol_svd(m, n) * s[0];
    Ok(SharpestDirection {
        vector: f.left_vectors.column(m - 1),
        ambiguous,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag12() -> Matrix {
        Matrix::from_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 2.0, 0.0]]).unwrap()
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn diagonal_pseudo_inverse() {
        let p = pseudo_inverse(&diag12()).unwrap();
        assert_close(p.as_slice(), &[1.0, 0.0, 0.0, 0.5, 0.0, 0.0], 1e-15);
        assert!((condition_number(&diag12()).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn orthonormal_rows_invert_to_transpose() {
        let s = 0.5f64.sqrt();
        let a = Matrix::from_rows(&[vec![s, s, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        let p = pseudo_inverse(&a).unwrap();
        assert_close(p.as_slice(), a.transpose().as_slice(), 1e-15);
        assert!((condition_number(&Matrix::eye(3, 5)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rank_deficiency_is_an_error() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]]).unwrap();
        for r in [
            pseudo_inverse(&a).map(|_| ()),
            condition_number(&a).map(|_| ()),
            sharpest_direction(&a).map(|_| ()),
            solve_min_norm(&a, &[1.0, 2.0]).map(|_| ()),
        ] {
            match r {
                Err(Error::RankDeficient {
                    sigma_min,
                    sigma_max,
                }) => assert!(sigma_min < 1e-12 * sigma_max),
                other => panic!("{other:?}"),
            }
        }
        assert!(condition_number(&Matrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn least_squares_and_min_norm_examples() {
        let a = Matrix::from_rows(&[vec![1.0], vec![1.0]]).unwrap();
        assert_close(&solve_least_squares(&a, &[0.0, 2.0]).unwrap(), &[1.0], 1e-15);

        let a = Matrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        assert_close(&solve_min_norm(&a, &[2.0]).unwrap(), &[1.0, 1.0], 1e-15);
        let a = Matrix::from_rows(&[vec![1.0, 0.0, 0.0]]).unwrap();
        assert_close(&solve_min_norm(&a, &[3.0]).unwrap(), &[3.0, 0.0, 0.0], 1e-15);

        let tall = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let b = tall.matvec(&[2.0, -1.0]);
        let x = solve_least_squares(&tall, &b).unwrap();
        assert_close(&x, &[2.0, -1.0], 1e-14);
    }

    #[test]
    fn solve_dimension_errors() {
        let wide = Matrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        assert!(matches!(solve_least_squares(&wide, &[1.0]), Err(Error::Dimension(_))));
        assert!(matches!(
            solve_min_norm(&wide.transpose(), &[1.0, 1.0]),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(solve_min_norm(&wide, &[1.0, 2.0]), Err(Error::Dimension(_))));
    }

    #[test]
    fn row_complement_examples() {
        let a = Matrix::from_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 1.0]]).unwrap();
        let rc = row_complement(&a).unwrap();
        assert_close(&rc.vector, &[0.0, 1.0, 1.0], 1e-15);
        assert!((rc.norm - 2f64.sqrt()).abs() < 1e-15);

        let inside = Matrix::from_rows(&[vec![1.0, 2.0, 0.0], vec![2.0, 4.0, 0.0]]).unwrap();
        assert!(row_complement(&inside).unwrap().norm < 1e-15);

        let dep = Matrix::from_rows(&[
            vec![1.0, 1.0, 0.0, 0.0],
            vec![2.0, 2.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        assert!(matches!(row_complement(&dep), Err(Error::DegenerateSpan { .. })));

        let single = Matrix::from_rows(&[vec![3.0, 4.0]]).unwrap();
        assert!((row_complement(&single).unwrap().norm - 5.0).abs() < 1e-15);
    }

    #[test]
    fn sharpest_direction_of_diagonal() {
        let u = sharpest_direction(&diag12()).unwrap();
        assert_close(&u.vector, &[1.0, 0.0], 1e-15);
        assert!(!u.ambiguous);
        assert!(sharpest_direction(&Matrix::eye(3, 4)).unwrap().ambiguous);
    }
}
