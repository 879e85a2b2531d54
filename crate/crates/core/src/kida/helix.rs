use std::f64::consts::PI;

use crate::curve::{QuasiCurve, ARC_LENGTH_TOL};
use crate::{Error, Result, Vec3};

const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX_ITER: usize = 50;

/// Helix of radius ε about the e₁ axis, advancing 2πp per turn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelixParams {
    eps: f64,
    p: f64,
}

impl HelixParams {
    pub fn new(eps: f64, p: f64) -> Result<Self> {
        if !(eps.is_finite() && p.is_finite() && eps > 0.0 && p > 0.0) {
            return Err(Error::InvalidParameter(format!("helix needs eps, p > 0, got {eps}, {p}")));
        }
        Ok(Self { eps, p })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// √(ε² + p²).
    pub fn normalizer(&self) -> f64 {
        self.eps.hypot(self.p)
    }

    pub fn period(&self) -> f64 {
        2.0 * PI * self.normalizer()
    }

    pub fn pitch(&self) -> Vec3 {
        Vec3::new(2.0 * PI * self.p, 0.0, 0.0)
    }

    /// γ₀(s) = (p𝔰, ε cos 𝔰, ε sin 𝔰), 𝔰 = s/√(ε²+p²).
    pub fn point(&self, s: f64) -> Vec3 {
        let t = s / self.normalizer();
        Vec3::new(self.p * t, self.eps * t.cos(), self.eps * t.sin())
    }

    pub fn tangent(&self, s: f64) -> Vec3 {
        let r = self.normalizer();
        let t = s / r;
        Vec3::new(self.p, -self.eps * t.sin(), self.eps * t.cos()) / r
    }

    /// Axis translation speed 1/√(ε²+p²).
    pub fn translation_speed(&self) -> f64 {
        1.0 / self.normalizer()
    }

    /// Slipping speed p/(ε²+p²).
    pub fn slip_speed(&self) -> f64 {
        self.p / (self.eps * self.eps + self.p * self.p)
    }

    /// Speed of the material point s = 0, ε²/(ε²+p²)^{3/2}.
    pub fn base_point_speed(&self) -> f64 {
        self.eps * self.eps / self.normalizer().powi(3)
    }

    /// Exact binormal-flow solution γ₀(s − Ct) + Vt e₁.
    pub fn eval_solution(&self, s: f64, t: f64) -> Vec3 {
        self.point(s - self.slip_speed() * t) + Vec3::x() * (self.translation_speed() * t)
    }
}

#[derive(Debug, Clone)]
pub struct HelixSolution {
    pub curve: QuasiCurve,
    pub translation_speed: f64,
    pub slip_speed: f64,
}

/// Arc-length helix on N nodes together with its two speeds.
pub fn simple_helix(h: &HelixParams, n: usize) -> Result<HelixSolution> {
    let curve =
        QuasiCurve::from_fn(n, h.period(), h.pitch(), |s| h.point(s))?.into_arc_length(ARC_LENGTH_TOL)?;
    Ok(HelixSolution { curve, translation_speed: h.translation_speed(), slip_speed: h.slip_speed() })
}

/// Positive root p of σ₀p³ + p² = m⁻² by Newton from p = 1/m.
pub fn helix_pitch_parameter(sigma0: f64, m: u32) -> Result<f64> {
    if !(sigma0.is_finite() && sigma0 >= 0.0) || m == 0 {
        return Err(Error::InvalidParameter(format!("need sigma0 >= 0 and m >= 1, got {sigma0}, {m}")));
    }
    let target = (m as f64).powi(-2);
    let mut p = 1.0 / m as f64;
    for _ in 0..NEWTON_MAX_ITER {
        let f = sigma0 * p * p * p + p * p - target;
        let df = 3.0 * sigma0 * p * p + 2.0 * p;
        let step = f / df;
        p -= step;
        if step.abs() <= NEWTON_TOL * p.abs() {
            return Ok(p);
        }
    }
    Err(Error::NewtonDivergence(p))
}
