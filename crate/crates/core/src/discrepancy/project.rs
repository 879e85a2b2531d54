use crate::curve::QuasiCurve;
use crate::{Error, Result, Vec3};

use super::CurvatureData;

const MAX_NEWTON: usize = 50;
const FALLBACK_SAMPLES: usize = 2001;

/// Orthogonal projection onto a reference curve, localized near a parameter.
#[derive(Debug, Clone, Copy)]
pub struct Projector<'a> {
    gamma: &'a QuasiCurve,
    r_gamma: f64,
    tol: f64,
}

impl<'a> Projector<'a> {
    pub fn new(gamma: &'a QuasiCurve, curvature: &CurvatureData, tol: f64) -> Self {
        Self { gamma, r_gamma: curvature.r_gamma, tol }
    }

    pub fn gamma(&self) -> &QuasiCurve {
        self.gamma
    }

    pub fn r_gamma(&self) -> f64 {
        self.r_gamma
    }

    /// The unique ξ ∈ (s₀ − r_γ/4, s₀ + r_γ/4) with (x − γ(ξ))·γ′(ξ) = 0.
    pub fn project(&self, s0: f64, x: Vec3) -> Result<f64> {
        self.project_from(s0, s0, x)
    }

    /// As `project`, with Newton started at `start` instead of the window center.
    pub fn project_from(&self, center: f64, start: f64, x: Vec3) -> Result<f64> {
        let distance = (x - self.gamma.eval(center)).norm();
        let limit = self.r_gamma / 8.0;
        if !(distance < limit) {
            return Err(Error::ProjectionPrecondition { distance, limit });
        }
        let half = self.r_gamma / 4.0;
        let (lo, hi) = (center - half, center + half);
        let start = if start > lo && start < hi { start } else { center };
        if let Some(xi) = self.newton(start, x, lo, hi) {
            return Ok(xi);
        }
        // local grid search, then polish
        let best = self.grid_search(x, lo.max(center - 2.0 * limit), hi.min(center + 2.0 * limit));
        self.newton(best, x, lo, hi).ok_or(Error::NewtonDivergence(best))
    }

    fn newton(&self, start: f64, x: Vec3, lo: f64, hi: f64) -> Option<f64> {
        let mut xi = start;
        for _ in 0..MAX_NEWTON {
            let j = self.gamma.jet(xi);
            let diff = x - j.pos;
            let h = diff.dot(&j.d1);
            let dh = -j.d1.norm_squared() + diff.dot(&j.d2);
            if h.abs() < self.tol {
                return (xi > lo && xi < hi).then_some(xi);
            }
            if !(dh < 0.0) {
                return None;
            }
            xi -= h / dh;
            if !(xi > lo && xi < hi) {
                return None;
            }
        }
        None
    }

    fn grid_search(&self, x: Vec3, lo: f64, hi: f64) -> f64 {
        let step = (hi - lo) / (FALLBACK_SAMPLES - 1) as f64;
        (0..FALLBACK_SAMPLES)
            .map(|i| lo + i as f64 * step)
            .map(|xi| (xi, (x - self.gamma.eval(xi)).norm_squared()))
            .fold((lo, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a })
            .0
    }
}

/// One-off projection with curvature data computed on the spot.
pub fn project(gamma: &QuasiCurve, s0: f64, x: Vec3, tol: f64) -> Result<f64> {
    let cd = CurvatureData::of(gamma)?;
    Projector::new(gamma, &cd, tol).project(s0, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn circle() -> QuasiCurve {
        QuasiCurve::from_fn(64, 2.0 * PI, Vec3::zeros(), |s| Vec3::new(s.cos(), s.sin(), 0.0)).unwrap()
    }

    #[test]
    fn circle_radial_point() {
        let xi = project(&circle(), 0.0, Vec3::new(0.9, 0.0, 0.0), 1e-12).unwrap();
        assert!(xi.abs() < 1e-14);
        let xi = project(&circle(), 1.0, Vec3::new(0.95 * 1.05f64.cos(), 0.95 * 1.05f64.sin(), 0.02), 1e-12)
            .unwrap();
        assert!((xi - 1.05).abs() < 1e-12);
    }

    #[test]
    fn line_foot() {
        let line = QuasiCurve::from_fn(16, 4.0, Vec3::new(4.0, 0.0, 0.0), |s| Vec3::new(s, 0.0, 0.0)).unwrap();
        let xi = project(&line, 0.9, Vec3::new(1.0, 0.05, 0.0), 1e-12).unwrap();
        assert!((xi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn precondition_and_idempotence() {
        let c = circle();
        let cd = CurvatureData::of(&c).unwrap();
        let p = Projector::new(&c, &cd, 1e-12);
        assert!(matches!(
            p.project(0.0, Vec3::new(0.5, 0.0, 0.0)),
            Err(Error::ProjectionPrecondition { .. })
        ));
        let x = Vec3::new(0.97, 0.1, -0.03);
        let xi = p.project(0.05, x).unwrap();
        assert!((p.project(xi, x).unwrap() - xi).abs() < 1e-14);
    }
}
