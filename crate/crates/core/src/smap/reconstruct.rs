use super::{SchrodingerMap, Trajectory};
use crate::curve::{integrate_tangent, QuasiCurve};
use crate::{Error, Result, Vec3};

/// Mean value (1/ℓ)∫₀^ℓ Γ_w of the primitive Γ_w(s) = ∫₀^s w.
fn primitive_mean(curve: &QuasiCurve) -> Vec3 {
    let n = curve.n() as f64;
    let periodic = curve.periodic_part().iter().fold(Vec3::zeros(), |a, p| a + p) / n;
    curve.pitch() * 0.5 + periodic
}

/// c_w(t) = (1/ℓ)∫₀^ℓ [(s−ℓ)(w(t,s) − w(0,s)) + ∫₀^t w×∂ₛw dτ] ds at every saved time.
///
/// The s-integral of (s−ℓ)w is evaluated through the primitive Γ_w, and the
/// time integral by the composite trapezoid rule over saved states.
pub fn base_point_correction(traj: &Trajectory) -> Result<Vec<Vec3>> {
    let Some(first) = traj.states.first() else {
        return Err(Error::InvalidParameter("empty trajectory".into()));
    };
    let model = SchrodingerMap::for_field(first)?;
    let ws = model.workspace();
    let period = first.period();
    let mut flux_means = Vec::with_capacity(traj.len());
    let mut prim_means = Vec::with_capacity(traj.len());
    for w in &traj.states {
        let ws_d = ws.derivative_vec3(w.samples(), 1)?;
        let flux: Vec<Vec3> = w.samples().iter().zip(&ws_d).map(|(a, b)| a.cross(b)).collect();
        flux_means.push(ws.integrate_vec3(&flux) / period);
        prim_means.push(primitive_mean(&integrate_tangent(w, Vec3::zeros())?));
    }
    let mut out = Vec::with_capacity(traj.len());
    let mut acc = Vec3::zeros();
    for i in 0..traj.len() {
        if i > 0 {
            acc += (flux_means[i] + flux_means[i - 1]) * (0.5 * (traj.times[i] - traj.times[i - 1]));
        }
        out.push(prim_means[0] - prim_means[i] + acc);
    }
    Ok(out)
}

/// γ_w(t) = c_w(t) + ∫₀^s w(t) at every saved time.
pub fn reconstruct_binormal(traj: &Trajectory) -> Result<Vec<QuasiCurve>> {
    let c_w = if traj.c_w.len() == traj.len() { traj.c_w.clone() } else { base_point_correction(traj)? };
    traj.states.iter().zip(&c_w).map(|(w, c)| integrate_tangent(w, *c)).collect()
}

/// L² norm of ∂ₜγ − ∂ₛγ×∂ₛₛγ at interior saved times, with ∂ₜ by central differences.
pub fn binormal_residual(curves: &[QuasiCurve], times: &[f64]) -> Result<Vec<(f64, f64)>> {
    if curves.len() != times.len() {
        return Err(Error::LengthMismatch { expected: times.len(), got: curves.len() });
    }
    let mut out = Vec::new();
    for i in 1..curves.len().saturating_sub(1) {
        let dt = times[i + 1] - times[i - 1];
        let c = &curves[i];
        let d1 = c.derivative_at_nodes(1)?;
        let d2 = c.derivative_at_nodes(2)?;
        let mut sum = 0.0;
        for j in 0..c.n() {
            let dtg = (curves[i + 1].node(j) - curves[i - 1].node(j)) / dt;
            sum += (dtg - d1[j].cross(&d2[j])).norm_squared();
        }
        out.push((times[i], (sum * c.spacing()).sqrt()));
    }
    Ok(out)
}
