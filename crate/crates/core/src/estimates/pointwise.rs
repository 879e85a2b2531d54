use rand::Rng;
use rand_distr::{Distribution, StandardNormal, UnitSphere};
use serde::Serialize;

use crate::rng::seeded;
use crate::{Result, Vec3};

use super::{FdSettings, RigidFlow, TubularField};

/// Additive tolerance, relative to K, on the pointwise inequality.
pub const POINTWISE_SLACK: f64 = 1e-6;

/// K = 8/r² + 32/r₀² + (2 + 32r/r₀)Σ₀ from the local curvature 1/r₀ and Σ₀ = |∂ₛₛₛγ|.
pub fn pointwise_constant(r: f64, curvature: f64, sigma0: f64) -> f64 {
    let inv_r2 = if r.is_finite() { 1.0 / (r * r) } else { 0.0 };
    let cross = if curvature > 0.0 { 32.0 * r * curvature } else { 0.0 };
    8.0 * inv_r2 + 32.0 * curvature * curvature + (2.0 + cross) * sigma0
}

/// One evaluated sample of |∂ₜX·V − D(curl X):(V⊗V)| ≤ K(1 − X·V).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PointwiseSample {
    pub s0: f64,
    pub distance: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub k: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointwiseReport {
    pub t0: f64,
    pub r: f64,
    pub requested: usize,
    pub evaluated: usize,
    pub rejected: usize,
    pub violations: usize,
    /// Largest lhs/(rhs + slack·K) over evaluated samples.
    pub max_ratio: f64,
    pub slack: f64,
    pub fd: FdSettings,
    pub samples: Vec<PointwiseSample>,
}

/// Evaluates the inequality at a given point x₀ with foot guess s₀ and direction V.
pub fn pointwise_sample(field: &TubularField, t0: f64, x0: Vec3, v: Vec3, s0: f64) -> Result<PointwiseSample> {
    let foot = field.foot(t0, x0, s0)?;
    let kappa = foot.jet.d2.norm();
    let k = pointwise_constant(field.r(), kappa, foot.jet.d3.norm());
    let x_dot_v = field.value_at(x0, &foot).dot(&v);
    let lhs = (field.dt_dot(t0, x0, v, foot.zeta)? - field.dcurl_vv(t0, x0, v, foot.zeta)?).abs();
    let rhs = k * (1.0 - x_dot_v);
    Ok(PointwiseSample {
        s0: foot.zeta,
        distance: foot.offset(x0).norm(),
        lhs,
        rhs,
        k,
        holds: lhs <= rhs + POINTWISE_SLACK * k,
    })
}

/// Random admissible (x₀, V) around γ(t₀, ·): x₀ = γ(s₀) + d·n with n normal and
/// d|∂ₛₛγ(s₀)| < 1/2, d < r. Half the directions are uniform on the sphere, half
/// are near the local tangent where 1 − X·V is small.
pub fn pointwise_estimate_check(
    flow: &RigidFlow,
    t0: f64,
    samples: usize,
    r: f64,
    seed: u64,
) -> Result<PointwiseReport> {
    let field = TubularField::new(flow, r)?;
    let mut rng = seeded(seed);
    let mut out = Vec::with_capacity(samples);
    let mut rejected = 0;
    for i in 0..samples {
        let s0 = rng.random_range(0.0..flow.period());
        let j = flow.jet(t0, s0);
        let kappa = j.d2.norm();
        let limit = if kappa > 0.0 { r.min(0.5 / kappa) } else { r.min(1.0) };
        let d = limit * rng.random_range(0.0..1.0_f64);
        let n1 = if kappa > 1e-12 { j.d2 / kappa } else { j.d1.cross(&Vec3::z()).try_normalize(1e-12).unwrap_or(Vec3::y()) };
        let n2 = j.d1.cross(&n1);
        let angle = rng.random_range(0.0..std::f64::consts::TAU);
        let x0 = j.pos + (n1 * angle.cos() + n2 * angle.sin()) * d;
        let v: Vec3 = if i % 2 == 0 {
            Vec3::from(UnitSphere.sample(&mut rng))
        } else {
            let g: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
            (j.d1 + Vec3::from(g) * 0.05).normalize()
        };
        let admissible = d < r && d * kappa < 0.5;
        match pointwise_sample(&field, t0, x0, v, s0) {
            Ok(smp) if admissible && (smp.s0 - s0).abs() < 1e-8 => out.push(smp),
            _ => rejected += 1,
        }
    }
    let violations = out.iter().filter(|s| !s.holds).count();
    let max_ratio = out.iter().map(|s| s.lhs / (s.rhs + POINTWISE_SLACK * s.k).max(1e-300)).fold(0.0, f64::max);
    Ok(PointwiseReport {
        t0,
        r,
        requested: samples,
        evaluated: out.len(),
        rejected,
        violations,
        max_ratio,
        slack: POINTWISE_SLACK,
        fd: FdSettings::default(),
        samples: out,
    })
}
