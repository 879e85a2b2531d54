//! Initial data: the circle u*, constants, Kida tangents and smooth random perturbations.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::curve::{SpectralWorkspace, SphereField};
use crate::kida::KidaParams;
use crate::{Error, Result, Vec3};

/// u*(s) = (cos s, sin s, 0) on [0, 2π).
pub fn circle(n: usize) -> Result<SphereField> {
    SphereField::from_fn(n, 2.0 * PI, |s| Vec3::new(s.cos(), s.sin(), 0.0))
}

pub fn constant(n: usize, period: f64, direction: Vec3) -> Result<SphereField> {
    SphereField::from_fn(n, period, |_| direction)
}

/// Tangent of a Kida solution at t = 0.
pub fn kida(params: &KidaParams, n: usize) -> Result<SphereField> {
    params.tangent_field(0.0, n)
}

/// s ↦ u(s + c), by spectral interpolation.
pub fn translated(u: &SphereField, c: f64) -> Result<SphereField> {
    let ws = SpectralWorkspace::new(u.n(), u.period())?;
    SphereField::normalized(ws.shift_vec3(u.samples(), c)?, u.period())
}

/// One Fourier term a cos(k·2πs/ℓ) + b sin(k·2πs/ℓ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub k: u32,
    pub cos: f64,
    pub sin: f64,
}

fn trig_sum(modes: &[Mode], x: f64) -> f64 {
    modes.iter().map(|m| m.cos * (m.k as f64 * x).cos() + m.sin * (m.k as f64 * x).sin()).sum()
}

fn random_modes<R: Rng>(rng: &mut R, ks: impl Iterator<Item = u32>) -> Vec<Mode> {
    ks.map(|k| {
        let decay = 1.0 / (k as f64).powi(2);
        let a: f64 = StandardNormal.sample(rng);
        let b: f64 = StandardNormal.sample(rng);
        Mode { k, cos: a * decay, sin: b * decay }
    })
    .collect()
}

/// Smooth perturbation of u* with zero mean:
/// v = normalize(cos(s + λφ), sin(s + λφ), λψ) where φ has only even modes
/// and ψ only odd multiples of 3.
///
/// Both components are antiperiodic under s ↦ s + π, so ∫v = 0 exactly, and
/// also at the nodes of any even grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricPerturbation {
    pub phase: Vec<Mode>,
    pub lift: Vec<Mode>,
}

impl SymmetricPerturbation {
    pub fn random<R: Rng>(rng: &mut R, modes: u32) -> Self {
        let phase = random_modes(rng, (1..=modes).map(|j| 2 * j));
        let lift = random_modes(rng, (1..=modes).map(|j| 3 * (2 * j - 1)));
        Self { phase, lift }
    }

    /// The perturbed field at amplitude λ.
    pub fn field(&self, n: usize, lambda: f64) -> Result<SphereField> {
        SphereField::from_fn(n, 2.0 * PI, |s| {
            let phi = lambda * trig_sum(&self.phase, s);
            let psi = lambda * trig_sum(&self.lift, s);
            Vec3::new((s + phi).cos(), (s + phi).sin(), psi)
        })
    }

    /// Field whose L² distance to u* equals `target`, found by bisection on λ.
    pub fn field_with_size(&self, n: usize, target: f64) -> Result<(SphereField, f64)> {
        if !(target > 0.0 && target < 1.0) {
            return Err(Error::InvalidParameter(format!("perturbation size {target} must lie in (0, 1)")));
        }
        let base = circle(n)?;
        let size = |l: f64| -> Result<f64> { self.field(n, l)?.l2_distance(&base) };
        let (mut lo, mut hi) = (0.0, 1.0);
        while size(hi)? < target {
            hi *= 2.0;
            if hi > 1e6 {
                return Err(Error::InvalidParameter("perturbation cannot reach the requested size".into()));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if size(mid)? < target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        let lambda = 0.5 * (lo + hi);
        Ok((self.field(n, lambda)?, lambda))
    }
}

/// Smooth random unit field normalize(base(s) + Σ random modes up to `modes`),
/// with mode amplitudes decaying like k⁻².
pub fn random_band_limited<R: Rng>(
    rng: &mut R,
    n: usize,
    period: f64,
    modes: u32,
    amplitude: f64,
) -> Result<SphereField> {
    let comps: Vec<Vec<Mode>> = (0..3).map(|_| random_modes(rng, 1..=modes)).collect();
    let offset = Vec3::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5), 1.0);
    let w = 2.0 * PI / period;
    SphereField::from_fn(n, period, |s| {
        let x = w * s;
        offset + Vec3::new(trig_sum(&comps[0], x), trig_sum(&comps[1], x), trig_sum(&comps[2], x)) * amplitude
    })
}

/// Declarative initial datum, as read from experiment configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialSpec {
    Circle,
    Constant {
        direction: [f64; 3],
        period: f64,
    },
    /// Kida tangent for (α, β, δ, m) at time `t`.
    Kida {
        alpha: f64,
        beta: f64,
        delta: f64,
        m: u32,
        #[serde(default)]
        t: f64,
    },
    /// Member of the drift family, optionally rescaled to period 2π.
    KidaFamily {
        sigma_tilde: f64,
        m: u32,
        #[serde(default)]
        rescale: bool,
        #[serde(default)]
        t: f64,
    },
    /// Zero-mean perturbation of u* with L² distance `size` to u*.
    SymmetricPerturbation {
        seed: u64,
        #[serde(default = "default_modes")]
        modes: u32,
        size: f64,
    },
    /// normalize(base + λp) at L² distance `size` from base, p a random smooth field.
    Perturbed {
        base: Box<InitialSpec>,
        seed: u64,
        #[serde(default = "default_modes")]
        modes: u32,
        size: f64,
    },
    Translated {
        base: Box<InitialSpec>,
        shift: f64,
    },
    /// Rotation of the base field by `angle` about e₃.
    Rotated {
        base: Box<InitialSpec>,
        angle: f64,
    },
}

fn default_modes() -> u32 {
    4
}

impl InitialSpec {
    pub fn build(&self, n: usize) -> Result<SphereField> {
        match self {
            InitialSpec::Circle => circle(n),
            InitialSpec::Constant { direction, period } => {
                constant(n, *period, Vec3::from(*direction).try_normalize(0.0).ok_or_else(|| {
                    Error::InvalidParameter("constant direction must be non-zero".into())
                })?)
            }
            InitialSpec::Kida { alpha, beta, delta, m, t } => {
                crate::kida::derive_params(*alpha, *beta, *delta, *m)?.tangent_field(*t, n)
            }
            InitialSpec::KidaFamily { sigma_tilde, m, rescale, t } => {
                let p = crate::kida::illposed_family(*sigma_tilde, *m)?;
                let p = if *rescale { p.rescaled_to_2pi() } else { p };
                p.tangent_field(*t, n)
            }
            InitialSpec::SymmetricPerturbation { seed, modes, size } => {
                let p = SymmetricPerturbation::random(&mut crate::rng::seeded(*seed), *modes);
                Ok(p.field_with_size(n, *size)?.0)
            }
            InitialSpec::Perturbed { base, seed, modes, size } => {
                let u = base.build(n)?;
                perturbed(&u, &mut crate::rng::seeded(*seed), *modes, *size)
            }
            InitialSpec::Translated { base, shift } => translated(&base.build(n)?, *shift),
            InitialSpec::Rotated { base, angle } => {
                let rot = nalgebra::Rotation3::from_axis_angle(&Vec3::z_axis(), *angle);
                base.build(n)?.mapped(rot.matrix())
            }
        }
    }
}

/// normalize(u + λp) with λ chosen so the L² distance to u equals `size`.
pub fn perturbed<R: Rng>(u: &SphereField, rng: &mut R, modes: u32, size: f64) -> Result<SphereField> {
    if !(size > 0.0 && size < 1.0) {
        return Err(Error::InvalidParameter(format!("perturbation size {size} must lie in (0, 1)")));
    }
    let comps: Vec<Vec<Mode>> = (0..3).map(|_| random_modes(rng, 1..=modes)).collect();
    let w = 2.0 * PI / u.period();
    let nodes = u.nodes();
    let p: Vec<Vec3> = nodes
        .iter()
        .map(|&s| Vec3::new(trig_sum(&comps[0], w * s), trig_sum(&comps[1], w * s), trig_sum(&comps[2], w * s)))
        .collect();
    let field = |l: f64| -> Result<SphereField> {
        SphereField::normalized(u.samples().iter().zip(&p).map(|(a, b)| a + b * l).collect(), u.period())
    };
    let size_at = |l: f64| -> Result<f64> { field(l)?.l2_distance(u) };
    let (mut lo, mut hi) = (0.0, 0.1);
    while size_at(hi)? < size {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::InvalidParameter("perturbation cannot reach the requested size".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if size_at(mid)? < size {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    field(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::pitch_of;
    use crate::rng::seeded;

    #[test]
    fn symmetric_perturbation_has_zero_mean() {
        let p = SymmetricPerturbation::random(&mut seeded(1), 4);
        for n in [64, 256] {
            let v = p.field(n, 0.05).unwrap();
            assert!(pitch_of(&v).norm() < 1e-13);
        }
    }

    #[test]
    fn size_is_hit() {
        let p = SymmetricPerturbation::random(&mut seeded(2), 3);
        let (v, _) = p.field_with_size(128, 1e-3).unwrap();
        let d = v.l2_distance(&circle(128).unwrap()).unwrap();
        assert!((d - 1e-3).abs() < 1e-12);
    }

    #[test]
    fn translation_matches_closed_form() {
        let u = circle(32).unwrap();
        let v = translated(&u, 0.1).unwrap();
        for (j, s) in u.nodes().iter().enumerate() {
            assert!((v.samples()[j] - Vec3::new((s + 0.1).cos(), (s + 0.1).sin(), 0.0)).norm() < 1e-13);
        }
    }

    #[test]
    fn specs_build_and_round_trip() {
        let spec = InitialSpec::Perturbed { base: Box::new(InitialSpec::Circle), seed: 4, modes: 3, size: 1e-2 };
        let v = spec.build(64).unwrap();
        assert!((v.l2_distance(&circle(64).unwrap()).unwrap() - 1e-2).abs() < 1e-12);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<InitialSpec>(&text).unwrap(), spec);
        let k = InitialSpec::KidaFamily { sigma_tilde: 1.0, m: 5, rescale: false, t: 0.0 }.build(128).unwrap();
        assert_eq!(k.n(), 128);
    }

    #[test]
    fn random_field_is_deterministic() {
        let a = random_band_limited(&mut seeded(5), 64, 2.0 * PI, 4, 0.3).unwrap();
        let b = random_band_limited(&mut seeded(5), 64, 2.0 * PI, 4, 0.3).unwrap();
        assert_eq!(a, b);
    }
}
