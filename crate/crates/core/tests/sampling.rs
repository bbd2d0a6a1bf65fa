//! Distributional checks of the samplers against independent constructions.

use smoothcond::gamma::expected_chi;
use smoothcond::matrix::norm;
use smoothcond::sampling::Seed;
use smoothcond::stats::{ks_critical, ks_statistic, mean_and_se};

const SAMPLES: usize = 20_000;
const ALPHA: f64 = 0.001;

fn box_muller(seed: Seed, count: usize) -> Vec<f64> {
    let mut st = seed.stream();
    (0..count)
        .map(|_| {
            let (u, v) = (st.uniform_open(), st.uniform());
            (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
        })
        .collect()
}

#[test]
fn normal_moments() {
    let x = Seed::new(11, 0).stream().normals(SAMPLES);
    let e = mean_and_se(&x);
    assert!(e.mean.abs() < 4.0 * e.standard_error);
    let var = x.iter().map(|t| t * t).sum::<f64>() / SAMPLES as f64;
    assert!((var - 1.0).abs() < 0.04, "{var}");
    let kurt = x.iter().map(|t| t.powi(4)).sum::<f64>() / SAMPLES as f64;
    assert!((kurt - 3.0).abs() < 0.25, "{kurt}");
}

#[test]
fn normal_matches_box_muller() {
    let a = Seed::new(12, 0).stream().normals(SAMPLES);
    let b = box_muller(Seed::new(13, 0), SAMPLES);
    let d = ks_statistic(&a, &b);
    assert!(d < ks_critical(ALPHA, SAMPLES, SAMPLES), "{d}");
}

#[test]
fn chi_matches_norm_of_normals_on_both_paths() {
    for k in [1usize, 3, 64, 65, 150] {
        let mut s1 = Seed::new(14, k as u64).stream();
        let mut s2 = Seed::new(15, k as u64).stream();
        let count = 5_000;
        let a: Vec<f64> = (0..count).map(|_| s1.chi(k)).collect();
        let b: Vec<f64> = (0..count).map(|_| norm(&s2.normals(k))).collect();
        let d = ks_statistic(&a, &b);
        assert!(d < ks_critical(ALPHA, count, count), "k={k}: {d}");
        let e = mean_and_se(&a);
        assert!((e.mean - expected_chi(k)).abs() < 4.0 * e.standard_error, "k={k}");
    }
}

#[test]
fn sphere_points_are_unit_and_isotropic() {
    let m = 5;
    let mut st = Seed::new(16, 0).stream();
    let mut second = vec![0.0; m];
    for _ in 0..SAMPLES {
        let v = st.unit_sphere(m);
        assert!((norm(&v) - 1.0).abs() < 1e-12);
        for (s, x) in second.iter_mut().zip(&v) {
            *s += x * x;
        }
    }
    for s in second {
        assert!((s / SAMPLES as f64 - 1.0 / m as f64).abs() < 0.01);
    }
}

#[test]
fn streams_are_reproducible_and_distinct() {
    let s = Seed::new(17, 3);
    assert_eq!(s.stream().normals(10), s.stream().normals(10));
    assert_ne!(s.stream().normals(10), s.with_stream(4).stream().normals(10));
    assert_ne!(s.derive("a").stream().normals(10), s.derive("b").stream().normals(10));
}
