use serde::{Deserialize, Serialize};

use crate::curve::{pitch_of, QuasiCurve, SpectralWorkspace, SphereField};
use crate::discrepancy::{f_functional, f_infimum, reparametrize_from, CurvatureData, DiscrepancyConfig, Reparametrization};
use crate::smap::{reconstruct_binormal, EvolveConfig, SchrodingerMap, Trajectory};
use crate::{Error, Result, Vec3};

/// Absolute floor added to the Gronwall bound so that F ≡ 0 runs pass.
pub const GRONWALL_ABS_TOL: f64 = 1e-12;
const PITCH_TOL: f64 = 1e-10;

/// How the base point of the rough curve is placed relative to the smooth one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseAlignment {
    /// Both curves start at the origin.
    Origin,
    /// Γ_v(0) = γ_u(c*), where c* minimizes ‖v₀ − u₀(· + c)‖₂.
    #[default]
    BestShift,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GronwallConfig {
    pub t_end: f64,
    pub dt: f64,
    #[serde(default = "default_save_every")]
    pub save_every: usize,
    /// Cutoff radius; defaults to r_γ/8 of the initial smooth curve.
    #[serde(default)]
    pub r: Option<f64>,
    #[serde(default)]
    pub alignment: BaseAlignment,
    /// Relative slack on e^{Kt}F(0) for discretization error.
    #[serde(default = "default_slack")]
    pub slack: f64,
    #[serde(default = "default_tol")]
    pub tol_newton: f64,
}

fn default_save_every() -> usize {
    10
}

fn default_slack() -> f64 {
    1e-3
}

fn default_tol() -> f64 {
    1e-12
}

impl GronwallConfig {
    pub fn new(t_end: f64, dt: f64) -> Self {
        Self {
            t_end,
            dt,
            save_every: default_save_every(),
            r: None,
            alignment: BaseAlignment::default(),
            slack: default_slack(),
            tol_newton: default_tol(),
        }
    }

    pub fn with_r(mut self, r: f64) -> Self {
        self.r = Some(r);
        self
    }

    pub fn with_save_every(mut self, n: usize) -> Self {
        self.save_every = n;
        self
    }

    pub fn with_alignment(mut self, a: BaseAlignment) -> Self {
        self.alignment = a;
        self
    }

    pub fn evolve_config(&self) -> EvolveConfig {
        EvolveConfig::new(self.t_end, self.dt).with_save_every(self.save_every)
    }
}

/// K, F_r and the data they are computed from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GronwallConstants {
    pub r: f64,
    pub r_gamma: f64,
    pub sup_d3: f64,
    pub big_l: f64,
    pub k: f64,
    pub f_r: f64,
}

impl GronwallConstants {
    /// K = 8/r² + 32/r_γ² + (2 + 32r/r_γ) sup|∂ₛₛₛγ| and F_r = r/(√2 + r/L).
    pub fn new(r: f64, r_gamma: f64, sup_d3: f64, big_l: f64) -> Self {
        let k = 8.0 / (r * r) + 32.0 / (r_gamma * r_gamma) + (2.0 + 32.0 * r / r_gamma) * sup_d3;
        let f_r = r / (std::f64::consts::SQRT_2 + r / big_l);
        Self { r, r_gamma, sup_d3, big_l, k, f_r }
    }

    /// T_r = log(F_r/F(0))/K.
    pub fn horizon(&self, f0: f64) -> f64 {
        (self.f_r / f0).ln() / self.k
    }
}

/// Two evolved tangent fields and their reconstructed curves on common saved times.
#[derive(Debug, Clone)]
pub struct PairedRun {
    pub times: Vec<f64>,
    pub u: Trajectory,
    pub v: Trajectory,
    pub gamma: Vec<QuasiCurve>,
    pub big_gamma: Vec<QuasiCurve>,
    /// Shift c* used for the base point of Γ (0 for `Origin`).
    pub shift: f64,
}

/// argmin_c ‖v − u(· + c)‖₂, on [0, ℓ).
pub fn best_shift(u: &SphereField, v: &SphereField) -> Result<f64> {
    if u.n() != v.n() {
        return Err(Error::LengthMismatch { expected: u.n(), got: v.n() });
    }
    let n = u.n();
    let (us, vs) = (u.samples(), v.samples());
    let cyclic = |k: usize| -> f64 { (0..n).map(|j| (vs[j] - us[(j + k) % n]).norm_squared()).sum() };
    let k0 = (0..n).map(|k| (k, cyclic(k))).fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a }).0;
    let ws = SpectralWorkspace::new(n, u.period())?;
    let cost = |c: f64| -> f64 {
        let shifted = ws.shift_vec3(us, c).expect("matching length");
        shifted.iter().zip(vs).map(|(a, b)| (a - b).norm_squared()).sum()
    };
    let h = u.spacing();
    let c = golden_min(cost, k0 as f64 * h - h, k0 as f64 * h + h, 1e-13 * u.period());
    Ok(c.rem_euclid(u.period()))
}

pub(crate) fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Evolves both data and reconstructs their curves; requires equal means.
pub fn paired_run(u0: &SphereField, v0: &SphereField, cfg: &GronwallConfig) -> Result<PairedRun> {
    if u0.n() != v0.n() || (u0.period() - v0.period()).abs() > 1e-14 * u0.period() {
        return Err(Error::InvalidParameter("smooth and rough data must share the grid".into()));
    }
    let (pu, pv) = (pitch_of(u0), pitch_of(v0));
    if (pu - pv).norm() > PITCH_TOL * pu.norm().max(1.0) {
        return Err(Error::PitchMismatch(pu.into(), pv.into()));
    }
    let model = SchrodingerMap::for_field(u0)?;
    let ecfg = cfg.evolve_config();
    let (u, v) = rayon::join(|| model.evolve(u0, &ecfg), || model.evolve(v0, &ecfg));
    let (u, v) = (u?, v?);
    let gamma = reconstruct_binormal(&u)?;
    let mut big_gamma = reconstruct_binormal(&v)?;
    let shift = match cfg.alignment {
        BaseAlignment::Origin => 0.0,
        BaseAlignment::BestShift => {
            let c = best_shift(u0, v0)?;
            let offset = gamma[0].eval(c) - big_gamma[0].eval(0.0);
            big_gamma = big_gamma.iter().map(|g| g.translated(offset)).collect();
            c
        }
    };
    Ok(PairedRun { times: u.times.clone(), u, v, gamma, big_gamma, shift })
}

/// σ(t, ·) continued frame to frame from the F-minimizing σ(0, ·).
#[derive(Debug, Clone)]
pub struct SigmaTrack {
    pub r: f64,
    pub curvature: Vec<CurvatureData>,
    pub sigmas: Vec<Reparametrization>,
    pub f_values: Vec<f64>,
    /// First saved time at which continuation failed, with the reason.
    pub exit: Option<(f64, String)>,
}

pub fn track_sigma(run: &PairedRun, r: Option<f64>, tol: f64) -> Result<SigmaTrack> {
    let cd0 = CurvatureData::of(&run.gamma[0])?;
    let r = r.unwrap_or(cd0.tube());
    if !cd0.admits_cutoff(r) {
        return Err(Error::Hypothesis(format!("cutoff r={r} must lie in (0, r_gamma/8 = {}]", cd0.tube())));
    }
    let dcfg = DiscrepancyConfig { r, tol_newton: tol, sigma0_scan: 64 };
    let first = f_infimum(&run.big_gamma[0], &run.gamma[0], &cd0, &dcfg)?;
    let Some(sigma0) = first.sigma else {
        return Err(Error::Hypothesis("no admissible reparametrization at t = 0".into()));
    };
    let mut track = SigmaTrack {
        r,
        curvature: vec![cd0],
        sigmas: vec![sigma0],
        f_values: vec![first.value.max(0.0)],
        exit: None,
    };
    for i in 1..run.times.len() {
        let cd = CurvatureData::of(&run.gamma[i])?;
        let prev = track.sigmas.last().expect("non-empty").samples().to_vec();
        match reparametrize_from(&run.gamma[i], &run.big_gamma[i], &prev, &cd, tol) {
            Ok(sigma) => {
                track.f_values.push(f_functional(&run.big_gamma[i], &run.gamma[i], &sigma, r)?.max(0.0));
                track.sigmas.push(sigma);
                track.curvature.push(cd);
            }
            Err(e @ (Error::Proximity { .. } | Error::ProjectionPrecondition { .. } | Error::NewtonDivergence(_))) => {
                track.exit = Some((run.times[i], e.to_string()));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(track)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GronwallRow {
    pub t: f64,
    pub f: f64,
    /// e^{Kt}F(0).
    pub bound: f64,
    pub sigma0: f64,
    /// sup|Γ − γ∘σ|, an upper bound for the parametric distance.
    pub d_parametric_upper: f64,
    /// t lies in the guaranteed window [0, T_r).
    pub in_window: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GronwallReport {
    pub constants: GronwallConstants,
    pub f0: f64,
    pub t_r: f64,
    pub shift: f64,
    pub slack: f64,
    pub rows: Vec<GronwallRow>,
    pub exit_time: Option<f64>,
    pub exit_reason: Option<String>,
    /// Every in-window row satisfies the bound and d_P < r.
    pub verdict: bool,
}

/// F(t) against e^{Kt}F(0) along the two flows, with σ continued in time.
pub fn gronwall_experiment(u0: &SphereField, v0: &SphereField, cfg: &GronwallConfig) -> Result<GronwallReport> {
    let run = paired_run(u0, v0, cfg)?;
    let track = track_sigma(&run, cfg.r, cfg.tol_newton)?;
    gronwall_report(&run, &track, cfg.slack)
}

pub fn gronwall_report(run: &PairedRun, track: &SigmaTrack, slack: f64) -> Result<GronwallReport> {
    let r_gamma = track.curvature.iter().map(|c| c.r_gamma).fold(f64::INFINITY, f64::min);
    let sup_d3 = track.curvature.iter().map(|c| c.sup_d3).fold(0.0, f64::max);
    if !track.curvature.iter().all(|c| c.admits_cutoff(track.r)) {
        return Err(Error::Hypothesis(format!("cutoff r={} exceeds r_gamma/8 = {} along the flow", track.r, r_gamma / 8.0)));
    }
    let constants = GronwallConstants::new(track.r, r_gamma, sup_d3, run.big_gamma[0].period());
    let f0 = track.f_values[0];
    if !(f0 < constants.f_r) {
        return Err(Error::Hypothesis(format!("F(0) = {f0:e} is not below F_r = {:e}", constants.f_r)));
    }
    let t_r = constants.horizon(f0);
    let rows: Vec<GronwallRow> = track
        .f_values
        .iter()
        .zip(&track.sigmas)
        .zip(&run.times)
        .map(|((&f, sigma), &t)| {
            let bound = (constants.k * t).exp() * f0;
            let in_window = t < t_r;
            let d = sigma.sup_distance();
            GronwallRow {
                t,
                f,
                bound,
                sigma0: sigma.sigma0(),
                d_parametric_upper: d,
                in_window,
                holds: f <= bound * (1.0 + slack) + GRONWALL_ABS_TOL && d < track.r,
            }
        })
        .collect();
    let verdict = rows.iter().filter(|r| r.in_window).all(|r| r.holds);
    Ok(GronwallReport {
        constants,
        f0,
        t_r,
        shift: run.shift,
        slack,
        rows,
        exit_time: track.exit.as_ref().map(|e| e.0),
        exit_reason: track.exit.as_ref().map(|e| e.1.clone()),
        verdict,
    })
}

pub(crate) fn l2_distance_raw(a: &[Vec3], b: &[Vec3], h: f64) -> f64 {
    (a.iter().zip(b).map(|(x, y)| (x - y).norm_squared()).sum::<f64>() * h).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial::{circle, translated, SymmetricPerturbation};
    use crate::rng::seeded;

    #[test]
    fn constants_formula() {
        let c = GronwallConstants::new(0.125, 1.0, 1.0, 2.0 * std::f64::consts::PI);
        assert!((c.k - 550.0).abs() < 1e-12);
        let again = GronwallConstants::new(c.r, c.r_gamma, c.sup_d3, c.big_l);
        assert_eq!(again, c);
        assert!(c.horizon(c.f_r).abs() < 1e-15);
    }

    #[test]
    fn best_shift_recovers_translation() {
        let u = circle(64).unwrap();
        let v = translated(&u, 0.3).unwrap();
        assert!((best_shift(&u, &v).unwrap() - 0.3).abs() < 1e-9);
    }

    #[test]
    fn identical_data_keep_zero_discrepancy() {
        let u = circle(64).unwrap();
        let cfg = GronwallConfig::new(0.01, 2e-4);
        let rep = gronwall_experiment(&u, &u, &cfg).unwrap();
        assert!(rep.rows.iter().all(|r| r.f < 1e-12 && r.holds), "{:?}", rep.rows);
        assert!(rep.verdict && rep.f0 < 1e-12);
    }

    #[test]
    fn small_perturbation_obeys_bound() {
        let p = SymmetricPerturbation::random(&mut seeded(3), 3);
        let (v, _) = p.field_with_size(64, 1e-3).unwrap();
        let u = circle(64).unwrap();
        let rep = gronwall_experiment(&u, &v, &GronwallConfig::new(0.01, 2e-4)).unwrap();
        assert!(rep.verdict, "{:?}", rep.rows);
        assert!(rep.exit_time.is_none());
    }

    #[test]
    fn unequal_means_rejected() {
        let u = circle(64).unwrap();
        let v = SphereField::from_fn(64, 2.0 * std::f64::consts::PI, |s| {
            Vec3::new(s.cos(), s.sin(), 0.1).normalize()
        })
        .unwrap();
        assert!(matches!(gronwall_experiment(&u, &v, &GronwallConfig::new(0.01, 2e-4)), Err(Error::PitchMismatch(..))));
    }
}
