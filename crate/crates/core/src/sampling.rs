//! Seeded samplers for Gaussian matrices, χ radii, the bidiagonal χ model
//! and uniform points on spheres.
//!
//! Every draw is a pure function of its parameters and a [`Seed`]. A seed
//! names a master value and a stream index; the stream's generator is keyed
//! by a splitmix64 hash of the pair, so streams can be consumed in any order
//! (or in parallel) without changing their contents. Normals come from the
//! Marsaglia polar method and uniforms from the top 53 bits of a ChaCha8
//! word, both fixed so that golden values stay stable.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{norm, Matrix};
use crate::svd::BidiagonalForm;

/// Degrees of freedom up to which χ variates are sums of squared normals.
pub const CHI_DIRECT_MAX_DOF: usize = 64;

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed {
    pub master: u64,
    pub stream_index: u64,
}

impl Seed {
    pub const fn new(master: u64, stream_index: u64) -> Self {
        Self {
            master,
            stream_index,
        }
    }

    /// Same master, different stream.
    pub const fn with_stream(self, stream_index: u64) -> Self {
        Self {
            master: self.master,
            stream_index,
        }
    }

    /// A new master derived from this seed and a tag, for independent
    /// sub-experiments that each enumerate their own streams.
    pub fn derive(self, tag: &str) -> Self {
        let mut h = splitmix64(self.master ^ splitmix64(self.stream_index));
        for b in tag.bytes() {
            h = splitmix64(h ^ u64::from(b));
        }
        Self::new(h, 0)
    }

    pub fn stream(self) -> SampleStream {
        let key = splitmix64(splitmix64(self.master) ^ self.stream_index.wrapping_mul(0xd1b5_4a32_d192_ed03));
        SampleStream {
            rng: ChaCha8Rng::seed_from_u64(key),
            spare_normal: None,
        }
    }
}

/// A single-owner random stream.
#[derive(Clone, Debug)]
pub struct SampleStream {
    rng: ChaCha8Rng,
    spare_normal: Option<f64>,
}

impl SampleStream {
    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1)`.
    pub fn uniform_open(&mut self) -> f64 {
        loop {
            let u = self.uniform();
            if u > 0.0 {
                return u;
            }
        }
    }

    /// Standard normal, Marsaglia polar method.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        loop {
            let x = 2.0 * self.uniform() - 1.0;
            let y = 2.0 * self.uniform() - 1.0;
            let s = x * x + y * y;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare_normal = Some(y * f);
                return x * f;
            }
        }
    }

    pub fn normals(&mut self, k: usize) -> Vec<f64> {
        (0..k).map(|_| self.normal()).collect()
    }

    /// Gamma(shape, 1) by Marsaglia–Tsang; shapes below one are boosted.
    pub fn gamma(&mut self, shape: f64) -> f64 {
        assert!(shape > 0.0, "gamma shape must be positive");
        if shape < 1.0 {
            let u = self.uniform_open();
            return self.gamma(shape + 1.0) * u.powf(1.0 / shape);
        }
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        loop {
            let x = self.normal();
            let v = 1.0 + c * x;
            if v <= 0.0 {
                continue;
            }
            let v = v * v * v;
            let u = self.uniform_open();
            if u < 1.0 - 0.0331 * x.powi(4) || u.ln() < 0.5 * x * x + d * (1.0 - v + v.ln()) {
                return d * v;
            }
        }
    }

    /// χ variate with `k >= 1` degrees of freedom.
    pub fn chi(&mut self, k: usize) -> f64 {
        assert!(k >= 1, "chi needs at least one degree of freedom");
        if k <= CHI_DIRECT_MAX_DOF {
            (0..k).map(|_| self.normal().powi(2)).sum::<f64>().sqrt()
        } else {
            (2.0 * self.gamma(0.5 * k as f64)).sqrt()
        }
    }

    pub fn unit_sphere(&mut self, m: usize) -> Vec<f64> {
        assert!(m >= 1, "sphere dimension must be positive");
        loop {
            let mut v = self.normals(m);
            let r = norm(&v);
            if r > 0.0 {
                v.iter_mut().for_each(|x| *x /= r);
                return v;
            }
        }
    }

    pub fn standard_gaussian(&mut self, m: usize, n: usize) -> Matrix {
        Matrix::from_fn(m, n, |_, _| self.normal())
    }

    pub fn gaussian_matrix(&mut self, e: &GaussianEnsemble) -> Matrix {
        if e.sigma == 0.0 {
            return e.center.clone();
        }
        let c = &e.center;
        Matrix::from_fn(c.rows(), c.cols(), |i, j| c[(i, j)] + e.sigma * self.normal())
    }

    pub fn bidiagonal_model(&mut self, m: usize, n: usize) -> BidiagonalForm {
        assert!(1 <= m && m <= n, "bidiagonal model needs 1 <= m <= n");
        let diagonal: Vec<f64> = (0..m).map(|i| self.chi(n - i)).collect();
        let subdiagonal: Vec<f64> = (1..m).map(|i| self.chi(m - i)).collect();
        BidiagonalForm::new(diagonal, subdiagonal, n).expect("valid by construction")
    }
}

/// `N(center, σ² I)` over `m × n` matrices.
#[derive(Clone, Debug)]
pub struct GaussianEnsemble {
    center: Matrix,
    sigma: f64,
}

impl GaussianEnsemble {
    /// `sigma = 0` is the point mass at `center`.
    pub fn new(center: Matrix, sigma: f64) -> Result<Self> {
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(Error::Domain {
                name: "sigma",
                value: sigma,
                expected: "finite and >= 0",
            });
        }
        Ok(Self { center, sigma })
    }

    pub fn standard(m: usize, n: usize) -> Self {
        Self {
            center: Matrix::zeros(m, n),
            sigma: 1.0,
        }
    }

    pub fn center(&self) -> &Matrix {
        &self.center
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn rows(&self) -> usize {
        self.center.rows()
    }

    pub fn cols(&self) -> usize {
        self.center.cols()
    }

    /// `0 < σ <= 1`, the range the smoothed tail bounds assume.
    pub fn in_smoothed_regime(&self) -> bool {
        self.sigma > 0.0 && self.sigma <= 1.0
    }
}

pub fn sample_gaussian_matrix(e: &GaussianEnsemble, seed: Seed) -> Matrix {
    seed.stream().gaussian_matrix(e)
}

pub fn sample_chi(k: usize, seed: Seed) -> f64 {
    seed.stream().chi(k)
}

pub fn sample_bidiagonal_model(m: usize, n: usize, seed: Seed) -> Result<BidiagonalForm> {
    if m == 0 || m > n {
        return Err(Error::Dimension(format!(
            "bidiagonal model needs 1 <= m <= n, got {m}x{n}"
        )));
    }
    Ok(seed.stream().bidiagonal_model(m, n))
}

pub fn sample_unit_sphere(m: usize, seed: Seed) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::Dimension("sphere dimension must be positive".into()));
    }
    Ok(seed.stream().unit_sphere(m))
}
