use serde::Serialize;

use crate::curve::{pitch_of, SpectralWorkspace, SphereField};
use crate::Result;

use super::gronwall::{l2_distance_raw, paired_run, track_sigma};
use super::GronwallConfig;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct WeakStrongRow {
    pub t: f64,
    /// σ(t) = σ(t, 0).
    pub sigma: f64,
    /// ‖v(t) − u(t, · + σ(t))‖₂.
    pub distance: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeakStrongReport {
    /// False when the means of u₀ and v₀ differ; no rows are produced then.
    pub applicable: bool,
    pub initial_distance: f64,
    pub rows: Vec<WeakStrongRow>,
    /// max over rows of the ratio, the empirical stability constant.
    pub empirical_c: f64,
    pub exit_time: Option<f64>,
}

impl WeakStrongReport {
    /// Ratio at the saved time closest to `t`.
    pub fn ratio_at(&self, t: f64) -> Option<f64> {
        self.rows.iter().min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs())).map(|r| r.ratio)
    }
}

/// ‖v(t) − u(t, · + σ(t))‖₂ / ‖v₀ − u₀‖₂ with σ from the Gronwall continuation.
/// A zero initial distance gives ratio 0.
pub fn weak_strong_experiment(u0: &SphereField, v0: &SphereField, cfg: &GronwallConfig) -> Result<WeakStrongReport> {
    let initial_distance = u0.l2_distance(v0)?;
    let (pu, pv) = (pitch_of(u0), pitch_of(v0));
    if (pu - pv).norm() > 1e-10 * pu.norm().max(1.0) {
        return Ok(WeakStrongReport { applicable: false, initial_distance, rows: Vec::new(), empirical_c: f64::NAN, exit_time: None });
    }
    let run = paired_run(u0, v0, cfg)?;
    let track = track_sigma(&run, cfg.r, cfg.tol_newton)?;
    let ws = SpectralWorkspace::new(u0.n(), u0.period())?;
    let rows = track
        .sigmas
        .iter()
        .enumerate()
        .map(|(i, sigma)| {
            let s = sigma.sigma0();
            let shifted = ws.shift_vec3(run.u.states[i].samples(), s)?;
            let distance = l2_distance_raw(run.v.states[i].samples(), &shifted, u0.spacing());
            let ratio = if initial_distance > 0.0 { distance / initial_distance } else { 0.0 };
            Ok(WeakStrongRow { t: run.times[i], sigma: s, distance, ratio })
        })
        .collect::<Result<Vec<_>>>()?;
    let empirical_c = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(WeakStrongReport { applicable: true, initial_distance, rows, empirical_c, exit_time: track.exit.map(|e| e.0) })
}
