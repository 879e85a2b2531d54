//! Time integration of the Schrödinger map ∂ₜu = ∂ₛ(u×∂ₛu) on the circle.

mod invariants;
mod reconstruct;

pub use invariants::{invariants, InvariantReport};
pub use reconstruct::{base_point_correction, binormal_residual, reconstruct_binormal};

use serde::{Deserialize, Serialize};

use crate::curve::{SpectralWorkspace, SphereField};
use crate::{Error, Result, Vec3};

/// Largest tolerated per-step drift off the sphere before renormalization.
pub const MAX_RENORMALIZATION: f64 = 1e-6;

pub const DEFAULT_CFL: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    pub t_end: f64,
    pub dt: f64,
    #[serde(default = "default_save_every")]
    pub save_every: usize,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
}

fn default_save_every() -> usize {
    10
}

fn default_cfl() -> f64 {
    DEFAULT_CFL
}

impl EvolveConfig {
    pub fn new(t_end: f64, dt: f64) -> Self {
        Self { t_end, dt, save_every: default_save_every(), cfl: DEFAULT_CFL }
    }

    pub fn with_save_every(mut self, save_every: usize) -> Self {
        self.save_every = save_every;
        self
    }

    /// Total step count (a multiple of `save_every`) and the step actually used.
    pub fn schedule(&self) -> Result<(usize, f64)> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidParameter(format!("dt={} must be positive", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::InvalidParameter(format!("t_end={} must be non-negative", self.t_end)));
        }
        if self.save_every == 0 {
            return Err(Error::InvalidParameter("save_every must be at least 1".into()));
        }
        if self.t_end == 0.0 {
            return Ok((0, self.dt));
        }
        let chunk = self.dt * self.save_every as f64;
        let saves = (self.t_end / chunk - 1e-9).ceil().max(1.0) as usize;
        let steps = saves * self.save_every;
        Ok((steps, self.t_end / steps as f64))
    }
}

/// Saved states of one run, with the base-point correction c_w at each save.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SphereField>,
    pub c_w: Vec<Vec3>,
}

impl Trajectory {
    pub fn final_state(&self) -> &SphereField {
        self.states.last().expect("trajectory holds the initial state")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Spectral semi-discretization with RK4 stepping and renormalization.
#[derive(Debug, Clone)]
pub struct SchrodingerMap {
    ws: SpectralWorkspace,
    cfl: f64,
}

impl SchrodingerMap {
    pub fn new(n: usize, period: f64) -> Result<Self> {
        Ok(Self { ws: SpectralWorkspace::new(n, period)?, cfl: DEFAULT_CFL })
    }

    pub fn for_field(u: &SphereField) -> Result<Self> {
        Self::new(u.n(), u.period())
    }

    pub fn with_cfl(mut self, cfl: f64) -> Self {
        self.cfl = cfl;
        self
    }

    pub fn workspace(&self) -> &SpectralWorkspace {
        &self.ws
    }

    /// Largest admissible step, c_cfl·(ℓ/N)².
    pub fn dt_limit(&self) -> f64 {
        self.cfl * self.ws.spacing().powi(2)
    }

    /// ∂ₛ(u×∂ₛu) at the nodes.
    pub fn rhs(&self, u: &[Vec3]) -> Vec<Vec3> {
        let us = self.ws.derivative_vec3(u, 1).expect("grid-sized input");
        let flux: Vec<Vec3> = u.iter().zip(&us).map(|(a, b)| a.cross(b)).collect();
        self.ws.derivative_vec3(&flux, 1).expect("grid-sized input")
    }

    fn check_dt(&self, dt: f64) -> Result<()> {
        let limit = self.dt_limit();
        if !(dt > 0.0) || dt > limit * (1.0 + 1e-12) {
            return Err(Error::Cfl { dt, limit });
        }
        Ok(())
    }

    /// One RK4 step followed by projection to the sphere; returns the projection size.
    pub fn step_raw(&self, u: &[Vec3], dt: f64) -> Result<(Vec<Vec3>, f64)> {
        let axpy = |base: &[Vec3], k: &[Vec3], h: f64| -> Vec<Vec3> {
            base.iter().zip(k).map(|(a, b)| a + b * h).collect()
        };
        let k1 = self.rhs(u);
        let k2 = self.rhs(&axpy(u, &k1, 0.5 * dt));
        let k3 = self.rhs(&axpy(u, &k2, 0.5 * dt));
        let k4 = self.rhs(&axpy(u, &k3, dt));
        let mut displacement: f64 = 0.0;
        let mut out = Vec::with_capacity(u.len());
        for j in 0..u.len() {
            let v = u[j] + (k1[j] + (k2[j] + k3[j]) * 2.0 + k4[j]) * (dt / 6.0);
            let norm = v.norm();
            if !norm.is_finite() {
                return Err(Error::NonFinite(norm));
            }
            displacement = displacement.max((norm - 1.0).abs());
            out.push(v / norm);
        }
        if displacement > MAX_RENORMALIZATION {
            return Err(Error::Renormalization(displacement));
        }
        Ok((out, displacement))
    }

    pub fn step(&self, u: &SphereField, dt: f64) -> Result<SphereField> {
        self.check_dt(dt)?;
        let (next, _) = self.step_raw(u.samples(), dt)?;
        Ok(SphereField::new(next, u.period()).expect("projected samples are unit"))
    }

    pub fn evolve(&self, u0: &SphereField, cfg: &EvolveConfig) -> Result<Trajectory> {
        if u0.n() != self.ws.n() {
            return Err(Error::LengthMismatch { expected: self.ws.n(), got: u0.n() });
        }
        let (steps, dt) = cfg.schedule()?;
        self.check_dt(dt)?;
        let mut times = vec![0.0];
        let mut states = vec![u0.clone()];
        let mut u = u0.samples().to_vec();
        for i in 1..=steps {
            u = self.step_raw(&u, dt)?.0;
            if i % cfg.save_every == 0 {
                times.push(i as f64 * dt);
                states.push(SphereField::new(u.clone(), u0.period()).expect("projected samples are unit"));
            }
        }
        let mut traj = Trajectory { times, states, c_w: Vec::new() };
        traj.c_w = base_point_correction(&traj)?;
        Ok(traj)
    }
}

/// ∂ₛ(u×∂ₛu) for a single field.
pub fn rhs(u: &SphereField) -> Result<Vec<Vec3>> {
    Ok(SchrodingerMap::for_field(u)?.rhs(u.samples()))
}

/// One step with the default CFL guard.
pub fn step(u: &SphereField, dt: f64) -> Result<SphereField> {
    SchrodingerMap::for_field(u)?.step(u, dt)
}

pub fn evolve(u0: &SphereField, cfg: &EvolveConfig) -> Result<Trajectory> {
    SchrodingerMap::for_field(u0)?.with_cfl(cfg.cfl).evolve(u0, cfg)
}
