//! Randomized invariants of the SVD, pseudo-inverse and condition number.

use proptest::prelude::*;
use smoothcond::pinv::{condition_number, moore_penrose_residuals, pseudo_inverse, tol_mp};
use smoothcond::svd::{singular_values, svd, tol_svd};
use smoothcond::Matrix;

fn matrix() -> impl Strategy<Value = Matrix> {
    (1usize..7, 1usize..7).prop_flat_map(|(m, n)| {
        prop::collection::vec(-10.0f64..10.0, m * n).prop_map(move |d| Matrix::new(m, n, d).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn singular_values_sorted_nonnegative(a in matrix()) {
        let s = singular_values(&a).unwrap();
        prop_assert_eq!(s.len(), a.rows().min(a.cols()));
        prop_assert!(s.iter().all(|x| *x >= 0.0));
        prop_assert!(s.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn frobenius_norm_is_root_sum_of_squares(a in matrix()) {
        let s = singular_values(&a).unwrap();
        let f = s.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!((f - a.frobenius_norm()).abs() <= 1e-10 * a.frobenius_norm().max(1.0));
    }

    #[test]
    fn transpose_preserves_spectrum(a in matrix()) {
        let s = singular_values(&a).unwrap();
        let t = singular_values(&a.transpose()).unwrap();
        let tol = tol_svd(a.rows(), a.cols()) * s[0].max(1.0);
        for (x, y) in s.iter().zip(&t) {
            prop_assert!((x - y).abs() <= tol);
        }
    }

    #[test]
    fn svd_reconstructs(a in matrix()) {
        let f = svd(&a).unwrap();
        let tol = tol_svd(a.rows(), a.cols()) * a.max_abs().max(1.0);
        prop_assert!(f.reconstruct().sub(&a).max_abs() <= tol);
    }

    #[test]
    fn pseudo_inverse_satisfies_penrose_identities(a in matrix()) {
        if let Ok(kappa) = condition_number(&a) {
            prop_assume!(kappa < 1e6);
            let x = pseudo_inverse(&a).unwrap();
            for r in moore_penrose_residuals(&a, &x) {
                prop_assert!(r <= tol_mp(kappa), "residual {} kappa {}", r, kappa);
            }
        }
    }

    #[test]
    fn condition_number_scale_invariant(a in matrix(), c in 0.01f64..100.0) {
        if let Ok(k) = condition_number(&a) {
            prop_assume!(k < 1e8);
            let ks = condition_number(&a.scaled(c)).unwrap();
            prop_assert!((k - ks).abs() <= 1e-9 * k);
            prop_assert!(k >= 1.0);
        }
    }
}
