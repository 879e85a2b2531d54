use thiserror::Error;

/// Errors raised by the numerical kernels.
///
/// Variants split into two families: `is_validation` errors reject inputs
/// before any computation happens, the rest are numerical failures detected
/// while a computation runs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size {0} is not a power of two (>= 4)")]
    GridSize(usize),
    #[error("derivative order {0} outside 1..=4")]
    DerivativeOrder(u32),
    #[error("sample {index} has norm {norm}, not on the unit sphere")]
    NotUnit { index: usize, norm: f64 },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("elliptic modulus k = {0} outside [0, 1)")]
    Modulus(f64),
    #[error("elliptic characteristic {0} produces a pole on the integration path")]
    Characteristic(f64),
    #[error("g(alpha, beta, delta) = {0} is not positive; no real rotation speed on this branch")]
    NonPositiveG(f64),
    #[error("closure condition violated by {0:e}")]
    Closure(f64),
    #[error("arc-length violation: max ||gamma'| - 1| = {0:e}")]
    ArcLength(f64),
    #[error("time step {dt:e} exceeds the stability limit {limit:e}")]
    Cfl { dt: f64, limit: f64 },
    #[error("renormalization displaced a sample by {0:e}")]
    Renormalization(f64),
    #[error("non-finite value encountered at t = {0}")]
    NonFinite(f64),
    #[error("projection precondition violated: distance {distance:e} >= r_gamma/8 = {limit:e}")]
    ProjectionPrecondition { distance: f64, limit: f64 },
    #[error("Newton projection did not converge (residual {0:e})")]
    NewtonDivergence(f64),
    #[error("curve left the tubular neighbourhood: distance {distance:e}, limit {limit:e}")]
    Proximity { distance: f64, limit: f64 },
    #[error("curvature data under-resolved: relative change {0:e} under grid refinement")]
    Resolution(f64),
    #[error("pitches differ: {0:?} vs {1:?}")]
    PitchMismatch([f64; 3], [f64; 3]),
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed input: {0}")]
    Format(String),
}

impl Error {
    /// True for errors that reject the input before computing anything.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::GridSize(_)
                | Error::DerivativeOrder(_)
                | Error::NotUnit { .. }
                | Error::LengthMismatch { .. }
                | Error::InvalidParameter(_)
                | Error::Modulus(_)
                | Error::Characteristic(_)
                | Error::Cfl { .. }
                | Error::ProjectionPrecondition { .. }
                | Error::PitchMismatch(..)
                | Error::Hypothesis(_)
                | Error::Io(_)
                | Error::Csv(_)
                | Error::Json(_)
                | Error::Format(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
