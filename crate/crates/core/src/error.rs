use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is rank deficient: sigma_min = {sigma_min:e}, sigma_max = {sigma_max:e}")]
    RankDeficient { sigma_min: f64, sigma_max: f64 },

    #[error("singular value iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("rows 1..{rows} are numerically dependent (residual norm {residual:e})")]
    DegenerateSpan { rows: usize, residual: f64 },

    #[error("{name} = {value} is outside its domain: {expected}")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("tail bound only asserted for z >= zeta: z = {z}, zeta = {zeta}")]
    BelowThreshold { z: f64, zeta: f64 },

    #[error("matrix is not symmetric (relative asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive definite: curvature p'Pp = {0:e}")]
    Indefinite(f64),

    #[error("{count} of {trials} draws were rank deficient")]
    RankDeficientDraws { count: usize, trials: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        expected,
    }
}
