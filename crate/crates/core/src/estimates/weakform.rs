use rayon::prelude::*;
use serde::Serialize;

use crate::curve::QuasiCurve;
use crate::{Error, Result};

use super::{FdSettings, TubularField};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct WeakFormRow {
    pub t: f64,
    /// d/dt ∫(X∘Γ)·∂ₛΓ by central differences over neighbouring frames.
    pub lhs: f64,
    /// ∫(∂ₜX∘Γ)·∂ₛΓ − (D curl X∘Γ):(∂ₛΓ⊗∂ₛΓ).
    pub rhs: f64,
    pub residual: f64,
    /// Largest distance from Γ(t) to γ(t); X vanishes past r.
    pub max_distance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeakFormReport {
    pub r: f64,
    pub fd: FdSettings,
    pub rows: Vec<WeakFormRow>,
}

impl WeakFormReport {
    pub fn max_residual(&self) -> f64 {
        self.rows.iter().map(|r| r.residual).fold(0.0, f64::max)
    }
}

struct Frame {
    integral: f64,
    rhs: f64,
    max_distance: f64,
}

fn frame(field: &TubularField, t: f64, curve: &QuasiCurve, with_rhs: bool) -> Result<Frame> {
    let feet = field.feet_along(t, curve)?;
    let tangents = curve.derivative_at_nodes(1)?;
    let h = curve.spacing();
    let terms: Vec<(f64, f64)> = (0..curve.n())
        .into_par_iter()
        .map(|j| {
            let x = curve.node(j);
            let v = tangents[j];
            let integrand = field.value_at(x, &feet[j]).dot(&v);
            let rhs = if with_rhs {
                field.dt_dot(t, x, v, feet[j].zeta)? - field.dcurl_vv(t, x, v, feet[j].zeta)?
            } else {
                0.0
            };
            Ok((integrand, rhs))
        })
        .collect::<Result<Vec<_>>>()?;
    let max_distance = (0..curve.n()).map(|j| feet[j].offset(curve.node(j)).norm()).fold(0.0, f64::max);
    Ok(Frame {
        integral: terms.iter().map(|t| t.0).sum::<f64>() * h,
        rhs: terms.iter().map(|t| t.1).sum::<f64>() * h,
        max_distance,
    })
}

/// Residual of d/dt∫(X∘Γ)·∂ₛΓ = ∫(∂ₜX∘Γ)·∂ₛΓ − (D curl X∘Γ):(∂ₛΓ⊗∂ₛΓ) at every
/// interior saved time. Γ must stay within r_γ/8 of γ, else a proximity error
/// names the first time it left.
pub fn weak_formulation_residual(
    field: &TubularField,
    curves: &[QuasiCurve],
    times: &[f64],
) -> Result<WeakFormReport> {
    if curves.len() != times.len() {
        return Err(Error::LengthMismatch { expected: times.len(), got: curves.len() });
    }
    if curves.len() < 3 {
        return Err(Error::InvalidParameter("need at least three saved frames".into()));
    }
    let frames: Vec<Frame> = curves
        .iter()
        .zip(times)
        .enumerate()
        .map(|(i, (c, &t))| {
            let interior = i > 0 && i + 1 < curves.len();
            frame(field, t, c, interior).map_err(|e| match e {
                Error::ProjectionPrecondition { distance, limit } | Error::Proximity { distance, limit } => {
                    Error::Hypothesis(format!(
                        "curve left the tubular neighbourhood at t = {t}: distance {distance:e} >= {limit:e}"
                    ))
                }
                other => other,
            })
        })
        .collect::<Result<_>>()?;
    let rows = (1..curves.len() - 1)
        .map(|i| {
            let lhs = (frames[i + 1].integral - frames[i - 1].integral) / (times[i + 1] - times[i - 1]);
            let rhs = frames[i].rhs;
            WeakFormRow { t: times[i], lhs, rhs, residual: (lhs - rhs).abs(), max_distance: frames[i].max_distance }
        })
        .collect();
    Ok(WeakFormReport { r: field.r(), fd: FdSettings::default(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimates::RigidFlow;
    use crate::Vec3;
    use nalgebra::Rotation3;

    fn frames(flow: &RigidFlow, dt: f64, count: usize) -> (Vec<QuasiCurve>, Vec<f64>) {
        let times: Vec<f64> = (0..count).map(|i| i as f64 * dt).collect();
        (times.iter().map(|&t| flow.curve_at(t)).collect(), times)
    }

    #[test]
    fn translating_circle_against_itself() {
        let flow = RigidFlow::unit_circle(64).unwrap();
        let field = TubularField::new(&flow, 0.125).unwrap();
        let (c, t) = frames(&flow, 1e-3, 5);
        let rep = weak_formulation_residual(&field, &c, &t).unwrap();
        assert!(rep.max_residual() < 1e-6, "{:?}", rep.rows);
    }

    #[test]
    fn field_below_closest_approach_vanishes() {
        let flow = RigidFlow::unit_circle(64).unwrap();
        let other = RigidFlow::circle(64, 1.0, Rotation3::identity(), Vec3::new(0.0, 0.0, 0.1)).unwrap();
        let field = TubularField::new(&flow, 0.05).unwrap();
        let (c, t) = frames(&other, 1e-3, 3);
        let rep = weak_formulation_residual(&field, &c, &t).unwrap();
        assert_eq!((rep.rows[0].lhs, rep.rows[0].rhs), (0.0, 0.0));
    }
}
