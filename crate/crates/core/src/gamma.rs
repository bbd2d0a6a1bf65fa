//! Log-gamma and sphere surface areas.

// Published coefficients are kept verbatim.
#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma needs a positive argument, got {x}");
    if x < 0.5 {
        // Reflection: Γ(x) Γ(1 − x) = π / sin(πx).
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS_COEF[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// `ln O_k`, the log surface area of the unit sphere `S^k ⊂ R^{k+1}`:
/// `O_k = 2 π^{(k+1)/2} / Γ((k+1)/2)`.
pub fn ln_sphere_area(k: usize) -> f64 {
    let p = (k + 1) as f64;
    std::f64::consts::LN_2 + 0.5 * p * PI.ln() - ln_gamma(0.5 * p)
}

pub fn sphere_area(k: usize) -> f64 {
    ln_sphere_area(k).exp()
}

/// `E‖Z‖ = √2 Γ((m+1)/2) / Γ(m/2)` for standard normal `Z ∈ R^m`.
pub fn expected_chi(m: usize) -> f64 {
    let m = m as f64;
    (0.5 * std::f64::consts::LN_2 + ln_gamma(0.5 * (m + 1.0)) - ln_gamma(0.5 * m)).exp()
}
