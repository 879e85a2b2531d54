use serde::Serialize;

use super::{SchrodingerMap, Trajectory};
use crate::curve::SphereField;
use crate::{Error, Result};

/// Energy and second conserved quantity along a trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct InvariantReport {
    pub times: Vec<f64>,
    /// E = ∫|∂ₛu|².
    pub energy: Vec<f64>,
    /// I = ∫|∂ₜu|² + |∂ₛₛu|² − (3/2)|∂ₛu|⁴.
    pub second: Vec<f64>,
    /// ‖∂ₛₛu‖₂² per time.
    pub h2_seminorm: Vec<f64>,
    /// 4‖∂ₛₛu⁰‖₂² + 2‖∂ₛu⁰‖₂⁶.
    pub h2_bound: f64,
}

impl InvariantReport {
    pub fn max_relative_energy_drift(&self) -> f64 {
        let e0 = self.energy[0];
        self.energy.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max) / e0.abs().max(f64::MIN_POSITIVE)
    }

    /// max |I(t) − I(0)| / max(1, |I(0)|).
    pub fn max_relative_second_drift(&self) -> f64 {
        let i0 = self.second[0];
        self.second.iter().map(|i| (i - i0).abs()).fold(0.0, f64::max) / i0.abs().max(1.0)
    }

    pub fn h2_bound_holds(&self) -> bool {
        self.h2_seminorm.iter().all(|h| *h <= self.h2_bound)
    }
}

/// (E, I, ‖∂ₛₛu‖²) of a single state.
pub fn state_invariants(model: &SchrodingerMap, u: &SphereField) -> (f64, f64, f64) {
    let ws = model.workspace();
    let us = ws.derivative_vec3(u.samples(), 1).expect("grid-sized input");
    let uss = ws.derivative_vec3(u.samples(), 2).expect("grid-sized input");
    let ut = model.rhs(u.samples());
    let h = ws.spacing();
    let mut e = 0.0;
    let mut i = 0.0;
    let mut h2 = 0.0;
    for j in 0..u.n() {
        let a = us[j].norm_squared();
        let b = uss[j].norm_squared();
        e += a;
        h2 += b;
        i += ut[j].norm_squared() + b - 1.5 * a * a;
    }
    (e * h, i * h, h2 * h)
}

pub fn invariants(traj: &Trajectory) -> Result<InvariantReport> {
    let first = traj.states.first().ok_or_else(|| Error::InvalidParameter("empty trajectory".into()))?;
    let model = SchrodingerMap::for_field(first)?;
    let mut report = InvariantReport {
        times: traj.times.clone(),
        energy: Vec::with_capacity(traj.len()),
        second: Vec::with_capacity(traj.len()),
        h2_seminorm: Vec::with_capacity(traj.len()),
        h2_bound: 0.0,
    };
    for u in &traj.states {
        let (e, i, h2) = state_invariants(&model, u);
        report.energy.push(e);
        report.second.push(i);
        report.h2_seminorm.push(h2);
    }
    report.h2_bound = 4.0 * report.h2_seminorm[0] + 2.0 * report.energy[0].powi(3);
    Ok(report)
}
