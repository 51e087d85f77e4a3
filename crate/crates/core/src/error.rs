use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("right-hand side has nonzero mean {mean:e} (limit {limit:e})")]
    NonZeroMean { mean: f64, limit: f64 },

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("{family} profile provides derivatives up to order {available}, order {requested} requested")]
    UnsupportedOrder {
        family: &'static str,
        requested: usize,
        available: usize,
    },

    #[error("radius {r} outside the valid range [{min}, {max}]")]
    OutOfRange { r: f64, min: f64, max: f64 },

    #[error("quadrature did not converge: achieved {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("predicate violated: {0}")]
    Predicate(String),

    #[error("{count} sample points outside the validity region, first at {first:?}")]
    OutsideRegion { count: usize, first: [f64; 3] },

    #[error("divergence precheck failed: relative divergence {0:e}")]
    NotSolenoidal(f64),

    #[error("series too short: {needed} snapshots needed, {got} available")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("CFL violation at t = {t}: dt = {dt} exceeds limit {limit}")]
    Cfl { t: f64, dt: f64, limit: f64 },

    #[error("not an orthogonal matrix: |QᵀQ - I| = {0:e}")]
    NotOrthogonal(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("bad field file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
