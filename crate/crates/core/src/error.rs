use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid problem: {0}")]
    InvalidSpec(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("kappa must exceed 1, got {0}")]
    DegenerateKappa(f64),

    #[error("matrix is singular to working precision (pivot {pivot} of {size})")]
    Singular { pivot: usize, size: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{solution} did not converge after {reps} reps (last max |d^(q)| = {last:e})")]
    NotConverged {
        solution: &'static str,
        reps: usize,
        last: f64,
        history: Vec<f64>,
    },

    #[error("point (rho = {rho}) lies outside the annulus [{inner}, 1]")]
    OutsideAnnulus { rho: f64, inner: f64 },

    #[error("fixed arc too short: {0}")]
    ArcTooShort(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("config: {0}")]
    ConfigIncomplete(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
