use std::path::Path;

use anyhow::{bail, ensure, Context};
use filamentlab::estimates::{CrossCheckConfig, GronwallConfig, RigidFlow};
use filamentlab::initial::InitialSpec;
use filamentlab::kida::{derive_params, illposed_family, HelixParams};
use filamentlab::Vec3;
use nalgebra::Rotation3;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub fn load<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn positive(name: &str, v: f64) -> anyhow::Result<()> {
    ensure!(v.is_finite() && v > 0.0, "{name} = {v} must be positive and finite");
    Ok(())
}

pub fn grid(n: usize) -> anyhow::Result<()> {
    ensure!(n >= 8 && n.is_power_of_two(), "grid size n = {n} must be a power of two, at least 8");
    Ok(())
}

pub fn gronwall_run(run: &GronwallConfig) -> anyhow::Result<()> {
    positive("t_end", run.t_end)?;
    positive("dt", run.dt)?;
    ensure!(run.save_every > 0, "save_every must be at least 1");
    if let Some(r) = run.r {
        positive("r", r)?;
    }
    ensure!(run.slack.is_finite() && run.slack >= 0.0, "slack = {} must be non-negative", run.slack);
    positive("tol_newton", run.tol_newton)
}

fn initial(spec: &InitialSpec) -> anyhow::Result<()> {
    match spec {
        InitialSpec::Constant { period, .. } => positive("period", *period),
        InitialSpec::SymmetricPerturbation { size, .. } | InitialSpec::Perturbed { size, .. } => {
            ensure!(*size > 0.0 && *size < 1.0, "perturbation size {size} must lie in (0, 1)");
            if let InitialSpec::Perturbed { base, .. } = spec {
                initial(base)?;
            }
            Ok(())
        }
        InitialSpec::Translated { base, .. } | InitialSpec::Rotated { base, .. } => initial(base),
        _ => Ok(()),
    }
}

/// Exact rigid-motion solutions usable as the smooth reference γ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FlowSpec {
    /// Circle of the given radius, tilted about e₁ and centered at `center`.
    Circle {
        #[serde(default = "one")]
        radius: f64,
        #[serde(default)]
        tilt: f64,
        #[serde(default)]
        center: [f64; 3],
    },
    Kida {
        alpha: f64,
        beta: f64,
        delta: f64,
        m: u32,
    },
    KidaFamily {
        sigma_tilde: f64,
        m: u32,
        #[serde(default)]
        rescale: bool,
    },
    Helix {
        eps: f64,
        p: f64,
    },
    Line {
        period: f64,
        direction: [f64; 3],
    },
}

fn one() -> f64 {
    1.0
}

impl FlowSpec {
    pub fn build(&self, n: usize) -> anyhow::Result<RigidFlow> {
        Ok(match self {
            FlowSpec::Circle { radius, tilt, center } => {
                RigidFlow::circle(n, *radius, Rotation3::from_axis_angle(&Vec3::x_axis(), *tilt), Vec3::from(*center))?
            }
            FlowSpec::Kida { alpha, beta, delta, m } => RigidFlow::kida(&derive_params(*alpha, *beta, *delta, *m)?, n)?,
            FlowSpec::KidaFamily { sigma_tilde, m, rescale } => {
                let p = illposed_family(*sigma_tilde, *m)?;
                RigidFlow::kida(&if *rescale { p.rescaled_to_2pi() } else { p }, n)?
            }
            FlowSpec::Helix { eps, p } => RigidFlow::helix(&HelixParams::new(*eps, *p)?, n)?,
            FlowSpec::Line { period, direction } => {
                positive("period", *period)?;
                ensure!(Vec3::from(*direction).norm() > 0.0, "line direction must be non-zero");
                RigidFlow::line(n, *period, Vec3::from(*direction))?
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GronwallExperiment {
    pub n: usize,
    pub smooth: InitialSpec,
    pub rough: InitialSpec,
    pub run: GronwallConfig,
}

impl GronwallExperiment {
    pub fn validate(&self) -> anyhow::Result<()> {
        grid(self.n)?;
        initial(&self.smooth)?;
        initial(&self.rough)?;
        gronwall_run(&self.run)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeakStrongExperiment {
    pub n: usize,
    pub smooth: InitialSpec,
    /// Each entry is compared with `smooth` in an independent run.
    pub rough: Vec<InitialSpec>,
    pub run: GronwallConfig,
    /// Time at which the ratios are compared across runs; defaults to t_end.
    #[serde(default)]
    pub compare_at: Option<f64>,
}

impl WeakStrongExperiment {
    pub fn validate(&self) -> anyhow::Result<()> {
        grid(self.n)?;
        ensure!(!self.rough.is_empty(), "rough must list at least one initial datum");
        initial(&self.smooth)?;
        for r in &self.rough {
            initial(r)?;
        }
        if let Some(t) = self.compare_at {
            ensure!(t >= 0.0 && t <= self.run.t_end, "compare_at = {t} must lie in [0, t_end]");
        }
        gronwall_run(&self.run)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointwiseExperiment {
    pub n: usize,
    pub flow: FlowSpec,
    #[serde(default)]
    pub t0: f64,
    pub samples: usize,
    /// Cutoff radius; defaults to r_γ/8 of the flow.
    #[serde(default)]
    pub r: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

impl PointwiseExperiment {
    pub fn validate(&self) -> anyhow::Result<()> {
        grid(self.n)?;
        ensure!(self.samples > 0, "samples must be at least 1");
        ensure!(self.t0.is_finite(), "t0 must be finite");
        if let Some(r) = self.r {
            ensure!(r > 0.0, "r = {r} must be positive");
        }
        Ok(())
    }
}

/// Source of the compared curves Γ(t) in the weak-form check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FrameSource {
    /// Another exact rigid solution.
    Rigid { flow: FlowSpec },
    /// A numerically evolved tangent field, translated so that the node
    /// centroids of Γ(0) and γ(0) coincide.
    Evolved { init: InitialSpec, dt: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeakFormExperiment {
    pub n: usize,
    pub gamma: FlowSpec,
    pub big_gamma: FrameSource,
    pub t_end: f64,
    /// One residual series per save interval.
    pub save_intervals: Vec<f64>,
    /// Cutoff radius; defaults to r_γ/8 of γ.
    #[serde(default)]
    pub r: Option<f64>,
}

impl WeakFormExperiment {
    pub fn validate(&self) -> anyhow::Result<()> {
        grid(self.n)?;
        positive("t_end", self.t_end)?;
        ensure!(!self.save_intervals.is_empty(), "save_intervals must not be empty");
        for &h in &self.save_intervals {
            positive("save interval", h)?;
            ensure!(2.0 * h <= self.t_end, "save interval {h} leaves fewer than three frames before t_end");
        }
        if let FrameSource::Evolved { init, dt } = &self.big_gamma {
            initial(init)?;
            positive("dt", *dt)?;
            for &h in &self.save_intervals {
                let k = (h / dt).round();
                if k < 1.0 || (k * dt - h).abs() > 1e-9 * h {
                    bail!("save interval {h} is not a multiple of dt = {dt}");
                }
            }
        }
        if let Some(r) = self.r {
            positive("r", r)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IllposedExperiment {
    pub sigma_tilde: f64,
    pub m: Vec<u32>,
    #[serde(default)]
    pub cross_check: Option<CrossCheckConfig>,
}

impl IllposedExperiment {
    pub fn validate(&self) -> anyhow::Result<()> {
        ensure!(self.sigma_tilde.is_finite(), "sigma_tilde must be finite");
        ensure!(!self.m.is_empty(), "m must list at least one winding");
        if let Some(&m) = self.m.iter().find(|&&m| m < 10) {
            bail!("winding m = {m} below 10");
        }
        if let Some(c) = &self.cross_check {
            grid(c.n)?;
            positive("cross_check.dt", c.dt)?;
            positive("cross_check.t_end", c.t_end)?;
            ensure!(c.m >= 2 && c.save_every > 0, "cross_check needs m >= 2 and save_every >= 1");
        }
        Ok(())
    }
}
