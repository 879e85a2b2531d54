use nalgebra::Rotation3;
use serde::{Deserialize, Serialize};

use crate::curve::SpectralWorkspace;
use crate::kida::{drift, family_table, illposed_family};
use crate::smap::{EvolveConfig, SchrodingerMap};
use crate::{Error, Result, Vec3};

const GAUSS_NEWTON_ITERS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossCheckConfig {
    pub m: u32,
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_save_every")]
    pub save_every: usize,
}

fn default_save_every() -> usize {
    10
}

impl Default for CrossCheckConfig {
    fn default() -> Self {
        Self { m: 20, n: 256, dt: 1e-4, t_end: 0.1, save_every: default_save_every() }
    }
}

/// Ω − C measured from an integrated Kida tangent against its closed form.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DriftCrossCheck {
    pub config: CrossCheckConfig,
    /// Fitted rotation angle φ(T) and slip c(T) with u(T) ≈ R(φ)u₀(· − c).
    pub phase: f64,
    pub slip: f64,
    pub measured: f64,
    pub exact: f64,
    pub relative_error: f64,
    /// RMS misfit of the final fit.
    pub fit_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DriftReport {
    pub sigma_tilde: f64,
    pub m_values: Vec<u32>,
    /// Ω_m − C_m in the native frame of each family member.
    pub drift_values: Vec<f64>,
    /// Ω_m − C_m after rescaling each curve to period 2π.
    pub rescaled_drift_values: Vec<f64>,
    /// σ̃²/4.
    pub limit: f64,
    pub cross_check: Option<DriftCrossCheck>,
}

impl DriftReport {
    /// |drift − limit| is non-increasing along the m list.
    pub fn approaches_limit(&self) -> bool {
        let gaps: Vec<f64> = self.drift_values.iter().map(|d| (d - self.limit).abs()).collect();
        gaps.windows(2).all(|w| w[1] <= w[0])
    }
}

pub fn illposed_experiment(sigma_tilde: f64, m_list: &[u32], cross: Option<CrossCheckConfig>) -> Result<DriftReport> {
    if let Some(&m) = m_list.iter().find(|&&m| m < 10) {
        return Err(Error::InvalidParameter(format!("winding m={m} below 10")));
    }
    let native = family_table(sigma_tilde, m_list, false)?;
    let rescaled = family_table(sigma_tilde, m_list, true)?;
    let cross_check = cross.map(|c| drift_cross_check(sigma_tilde, &c)).transpose()?;
    Ok(DriftReport {
        sigma_tilde,
        m_values: m_list.to_vec(),
        drift_values: native.iter().map(|r| r.drift).collect(),
        rescaled_drift_values: rescaled.iter().map(|r| r.drift).collect(),
        limit: 0.25 * sigma_tilde * sigma_tilde,
        cross_check,
    })
}

/// Gauss–Newton fit of (φ, c) minimizing Σ|R(−φ)u_j − u₀(s_j − c)|².
fn fit_motion(ws: &SpectralWorkspace, u0: &[Vec3], du0: &[Vec3], u: &[Vec3], guess: (f64, f64)) -> Result<(f64, f64, f64)> {
    let (mut phi, mut c) = guess;
    let mut rms = f64::INFINITY;
    for _ in 0..GAUSS_NEWTON_ITERS {
        let rot = Rotation3::from_axis_angle(&Vec3::z_axis(), -phi);
        let base = ws.shift_vec3(u0, -c)?;
        let dbase = ws.shift_vec3(du0, -c)?;
        let (mut a11, mut a12, mut a22, mut b1, mut b2, mut ss) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        for j in 0..u.len() {
            let w = rot * u[j];
            let res = w - base[j];
            let jphi = -Vec3::z().cross(&w);
            let jc = dbase[j];
            a11 += jphi.dot(&jphi);
            a12 += jphi.dot(&jc);
            a22 += jc.dot(&jc);
            b1 += jphi.dot(&res);
            b2 += jc.dot(&res);
            ss += res.norm_squared();
        }
        rms = (ss / u.len() as f64).sqrt();
        let det = a11 * a22 - a12 * a12;
        if !(det.abs() > 0.0) {
            break;
        }
        let dphi = -(a22 * b1 - a12 * b2) / det;
        let dc = -(a11 * b2 - a12 * b1) / det;
        phi += dphi;
        c += dc;
        if dphi.abs().max(dc.abs()) < 1e-14 {
            break;
        }
    }
    Ok((phi, c, rms))
}

pub fn drift_cross_check(sigma_tilde: f64, cfg: &CrossCheckConfig) -> Result<DriftCrossCheck> {
    let params = illposed_family(sigma_tilde, cfg.m)?;
    let exact = drift(&params);
    let u0 = params.tangent_field(0.0, cfg.n)?;
    let model = SchrodingerMap::for_field(&u0)?;
    let ecfg = EvolveConfig::new(cfg.t_end, cfg.dt).with_save_every(cfg.save_every);
    let traj = model.evolve(&u0, &ecfg)?;
    let ws = model.workspace();
    let du0 = ws.derivative_vec3(u0.samples(), 1)?;
    let (mut prev, mut last) = ((0.0, 0.0), (0.0, 0.0));
    let mut rms = 0.0;
    for state in traj.states.iter().skip(1) {
        let guess = (2.0 * last.0 - prev.0, 2.0 * last.1 - prev.1);
        let (phi, c, r) = fit_motion(ws, u0.samples(), &du0, state.samples(), guess)?;
        prev = last;
        last = (phi, c);
        rms = r;
    }
    let t = *traj.times.last().expect("saved frames");
    let measured = (last.0 - last.1) / t;
    Ok(DriftCrossCheck {
        config: *cfg,
        phase: last.0,
        slip: last.1,
        measured,
        exact,
        relative_error: ((measured - exact) / exact).abs(),
        fit_residual: rms,
    })
}
