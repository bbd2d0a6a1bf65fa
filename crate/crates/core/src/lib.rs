//! Moore–Penrose inverses and condition numbers of rectangular matrices,
//! closed-form smoothed tail bounds for the condition number under
//! isotropic Gaussian perturbations, and a seeded Monte Carlo harness that
//! checks those bounds empirically.

pub mod bounds;
pub mod cg;
pub mod error;
pub mod experiments;
pub mod gamma;
pub mod matrix;
pub mod pinv;
pub mod sampling;
pub mod stats;
pub mod svd;

pub use error::{Error, Result};
pub use matrix::Matrix;
