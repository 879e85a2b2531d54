//! Numerical laboratory for the Schrödinger map equation on the circle,
//! ∂ₜu = ∂ₛ(u × ∂ₛu), and its primitive, the binormal curvature flow
//! ∂ₜγ = ∂ₛγ × ∂ₛₛγ.
//!
//! The crate is organised bottom-up:
//!
//! * [`curve`]: sphere-valued fields and quasiperiodic curves on uniform
//!   periodic grids, with spectral differentiation and interpolation.
//! * [`elliptic`]: complete and incomplete elliptic integrals and the Jacobi
//!   functions sn, cn, dn.
//! * [`kida`]: Kida's rigid-motion filaments, the wrapped-helix family and
//!   the simple helix.
//! * [`smap`]: time integration of the Schrödinger map equation, conserved
//!   quantities and reconstruction of the binormal-flow curve.
//! * [`discrepancy`]: projections, reparametrizations, distances and the
//!   discrepancy functional between quasiperiodic curves.
//! * [`estimates`]: experiments checking the weak formulation, the pointwise
//!   estimate, the Gronwall bound, weak-strong stability and the drift.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curve;
pub mod discrepancy;
pub mod elliptic;
mod error;
pub mod estimates;
pub mod initial;
pub mod kida;
pub mod rng;
pub mod smap;

pub use error::{Error, Result};

/// Three-vectors used throughout.
pub type Vec3 = nalgebra::Vector3<f64>;

/// Returns true if `n` is a power of two no smaller than 4.
pub(crate) fn is_grid_size(n: usize) -> bool {
    n >= 4 && n.is_power_of_two()
}
