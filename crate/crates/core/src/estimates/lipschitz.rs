use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{SpectralWorkspace, SphereField};
use crate::initial::{perturbed, InitialSpec};
use crate::rng::substream;
use crate::smap::{EvolveConfig, SchrodingerMap};
use crate::{Result, Vec3};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LipschitzConfig {
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "default_save_every")]
    pub save_every: usize,
    pub sizes: Vec<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_modes")]
    pub modes: u32,
    /// Also run on (2N, dt/2) and report the change in the constants.
    #[serde(default = "default_refine")]
    pub refine: bool,
}

fn default_save_every() -> usize {
    50
}

fn default_modes() -> u32 {
    4
}

fn default_refine() -> bool {
    true
}

/// Ratios ‖u − ǔ‖²_{Hᵏ}(t) / ‖u⁰ − ǔ⁰‖²_{Hᵏ} on one (N, dt) level.
#[derive(Debug, Clone, Serialize)]
pub struct LipschitzRun {
    pub n: usize,
    pub dt: f64,
    pub times: Vec<f64>,
    /// h1_ratios[size][time].
    pub h1_ratios: Vec<Vec<f64>>,
    pub h2_ratios: Vec<Vec<f64>>,
    /// max over sizes and times.
    pub c_h1: f64,
    pub c_h2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LipschitzReport {
    pub sizes: Vec<f64>,
    pub runs: Vec<LipschitzRun>,
    /// Relative change of (c_h1, c_h2) between the two levels.
    pub refinement_change: Option<(f64, f64)>,
    pub finite: bool,
}

/// Squared H¹ and H² norms of a periodic vector field.
pub fn sobolev_norms_squared(ws: &SpectralWorkspace, f: &[Vec3]) -> Result<(f64, f64)> {
    let d1 = ws.derivative_vec3(f, 1)?;
    let d2 = ws.derivative_vec3(f, 2)?;
    let sq = |v: &[Vec3]| ws.integrate(&v.iter().map(|x| x.norm_squared()).collect::<Vec<_>>());
    let (l2, h1s, h2s) = (sq(f), sq(&d1), sq(&d2));
    Ok((l2 + h1s, l2 + h1s + h2s))
}

fn diff(a: &SphereField, b: &SphereField) -> Vec<Vec3> {
    a.samples().iter().zip(b.samples()).map(|(x, y)| x - y).collect()
}

fn run_level(base: &InitialSpec, cfg: &LipschitzConfig, n: usize, dt: f64) -> Result<LipschitzRun> {
    let u0 = base.build(n)?;
    let model = SchrodingerMap::for_field(&u0)?;
    let ws = model.workspace();
    let ecfg = EvolveConfig::new(cfg.t_end, dt).with_save_every(cfg.save_every * (dt_ratio(cfg.dt, dt)));
    let reference = model.evolve(&u0, &ecfg)?;
    let per_size: Vec<(Vec<f64>, Vec<f64>)> = cfg
        .sizes
        .par_iter()
        .enumerate()
        .map(|(i, &size)| {
            let v0 = perturbed(&u0, &mut substream(cfg.seed, i as u64), cfg.modes, size)?;
            let traj = model.evolve(&v0, &ecfg)?;
            let (n1, n2) = sobolev_norms_squared(ws, &diff(&v0, &u0))?;
            let mut h1 = Vec::with_capacity(traj.len());
            let mut h2 = Vec::with_capacity(traj.len());
            for (v, u) in traj.states.iter().zip(&reference.states) {
                let (a1, a2) = sobolev_norms_squared(ws, &diff(v, u))?;
                h1.push(if n1 > 0.0 { a1 / n1 } else { 0.0 });
                h2.push(if n2 > 0.0 { a2 / n2 } else { 0.0 });
            }
            Ok((h1, h2))
        })
        .collect::<Result<_>>()?;
    let max_all = |v: &[Vec<f64>]| v.iter().flatten().copied().fold(0.0, f64::max);
    let h1_ratios: Vec<Vec<f64>> = per_size.iter().map(|p| p.0.clone()).collect();
    let h2_ratios: Vec<Vec<f64>> = per_size.into_iter().map(|p| p.1).collect();
    Ok(LipschitzRun {
        n,
        dt,
        times: reference.times.clone(),
        c_h1: max_all(&h1_ratios),
        c_h2: max_all(&h2_ratios),
        h1_ratios,
        h2_ratios,
    })
}

/// Save cadence multiplier keeping saved times aligned across levels.
fn dt_ratio(coarse: f64, fine: f64) -> usize {
    (coarse / fine).round().max(1.0) as usize
}

/// Empirical flow-map constants for perturbations of `base`; the perturbation
/// for size i uses sub-stream i of `seed` on every level.
pub fn flow_lipschitz_experiment(base: &InitialSpec, cfg: &LipschitzConfig) -> Result<LipschitzReport> {
    let mut runs = vec![run_level(base, cfg, cfg.n, cfg.dt)?];
    if cfg.refine {
        runs.push(run_level(base, cfg, 2 * cfg.n, 0.5 * cfg.dt)?);
    }
    let refinement_change = (runs.len() == 2).then(|| {
        let rel = |a: f64, b: f64| if a > 0.0 { (b - a).abs() / a } else { (b - a).abs() };
        (rel(runs[0].c_h1, runs[1].c_h1), rel(runs[0].c_h2, runs[1].c_h2))
    });
    let finite = runs.iter().all(|r| r.c_h1.is_finite() && r.c_h2.is_finite());
    Ok(LipschitzReport { sizes: cfg.sizes.clone(), runs, refinement_change, finite })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms_of_a_single_mode() {
        let n = 32;
        let ws = SpectralWorkspace::new(n, 2.0 * std::f64::consts::PI).unwrap();
        let f: Vec<Vec3> = ws.nodes().iter().map(|&s| Vec3::new((2.0 * s).sin(), 0.0, 0.0)).collect();
        let (h1, h2) = sobolev_norms_squared(&ws, &f).unwrap();
        let pi = std::f64::consts::PI;
        assert!((h1 - 5.0 * pi).abs() < 1e-10 && (h2 - 21.0 * pi).abs() < 1e-10);
    }

    #[test]
    fn ratios_are_finite_and_start_at_one() {
        let cfg = LipschitzConfig {
            n: 32,
            dt: 1e-3,
            t_end: 0.05,
            save_every: 10,
            sizes: vec![1e-2, 1e-3],
            seed: 1,
            modes: 3,
            refine: false,
        };
        let rep = flow_lipschitz_experiment(&InitialSpec::Circle, &cfg).unwrap();
        assert!(rep.finite);
        for row in &rep.runs[0].h1_ratios {
            assert!((row[0] - 1.0).abs() < 1e-12);
        }
    }
}
