pub mod discrepancy;
pub mod evolve;
pub mod experiments;
pub mod illposed;
pub mod kida;
pub mod selftest;

/// A run finished but one of its checks failed.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct CheckFailed(pub String);

/// JSON has no infinity; unbounded values are written as null.
pub fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}
