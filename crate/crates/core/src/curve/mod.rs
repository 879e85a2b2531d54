//! Sphere-valued fields, quasiperiodic curves and spectral operators on uniform periodic grids.

mod field;
pub mod io;
mod quasi;
mod spectral;

pub use field::{pitch_of, SphereField};
pub use quasi::{CurveJet, QuasiCurve, ARC_LENGTH_TOL};
pub use spectral::{derivative, SpectralWorkspace};

use crate::{Result, Vec3};

/// Γ(s) = base + ∫₀^s u, with the zero mode carried by the linear pitch part.
pub fn integrate_tangent(u: &SphereField, base: Vec3) -> Result<QuasiCurve> {
    let ws = SpectralWorkspace::new(u.n(), u.period())?;
    let anti = ws.antiderivative_vec3(u.samples())?;
    let a0 = anti[0];
    let periodic = anti.iter().map(|p| p - a0 + base).collect();
    Ok(QuasiCurve::new(pitch_of(u), u.period(), periodic)?.with_arc_length_flag(true))
}

/// Unit tangent field of an arc-length curve, normalized at the nodes.
pub fn tangent_field(curve: &QuasiCurve) -> Result<SphereField> {
    SphereField::normalized(curve.derivative_at_nodes(1)?, curve.period())
}
