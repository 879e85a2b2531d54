//! Closeness of quasiperiodic curves: orthogonal projection, reparametrizations,
//! parametric and Hausdorff distances, and the tubular discrepancy functional F.

mod distance;
mod functional;
mod project;
mod reparam;
mod suite;

pub use distance::{d_hausdorff, d_parametric_upper, pitches_match};
pub use functional::{cutoff_profile, f_functional, f_infimum, FInfimum};
pub use project::{project, Projector};
pub use reparam::{reparametrize, reparametrize_from, Reparametrization};
pub use suite::{inequality_suite, InequalityEntry, InequalityReport};

use serde::{Deserialize, Serialize};

use crate::curve::QuasiCurve;
use crate::{Error, Result};

const RESOLUTION_TOL: f64 = 0.01;
/// Relative accuracy assumed for the sampled maximum of |γ″|.
const R_GAMMA_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscrepancyConfig {
    /// Cutoff radius of the profile f(d²) = (1 − d²/r²)₊.
    pub r: f64,
    #[serde(default = "default_tol")]
    pub tol_newton: f64,
    #[serde(default = "default_scan")]
    pub sigma0_scan: usize,
}

fn default_tol() -> f64 {
    1e-12
}

fn default_scan() -> usize {
    64
}

impl DiscrepancyConfig {
    pub fn new(r: f64) -> Result<Self> {
        let cfg = Self { r, tol_newton: default_tol(), sigma0_scan: default_scan() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r.is_finite() && self.r > 0.0) {
            return Err(Error::InvalidParameter(format!("cutoff r={} must be positive", self.r)));
        }
        if !(self.tol_newton > 0.0) || self.sigma0_scan == 0 {
            return Err(Error::InvalidParameter("tol_newton and sigma0_scan must be positive".into()));
        }
        Ok(())
    }
}

/// Minimal radius of curvature and derivative bounds of a reference curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureData {
    /// (max |γ″|)⁻¹, infinite for a straight line.
    pub r_gamma: f64,
    pub sup_d2: f64,
    pub sup_d3: f64,
}

impl CurvatureData {
    /// Grid maxima of |γ″| and |γ‴|, checked against a twice finer sampling.
    ///
    /// Also requires N ≥ 8ℓ/r_γ, so that every projection window of width
    /// r_γ/2 contains grid nodes.
    pub fn of(gamma: &QuasiCurve) -> Result<Self> {
        let d2 = gamma.derivative_at_nodes(2)?;
        let d3 = gamma.derivative_at_nodes(3)?;
        let max_norm = |v: &[crate::Vec3]| v.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let (m2, m3) = (max_norm(&d2), max_norm(&d3));
        let n = gamma.n();
        let h = gamma.spacing() / 2.0;
        let (mut f2, mut f3) = (0.0_f64, 0.0_f64);
        for j in 0..2 * n {
            let jet = gamma.jet(j as f64 * h);
            f2 = f2.max(jet.d2.norm());
            f3 = f3.max(jet.d3.norm());
        }
        let change = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1e-9);
        let worst = change(m2, f2).max(change(m3, f3));
        if worst > RESOLUTION_TOL {
            return Err(Error::Resolution(worst));
        }
        let sup_d2 = m2.max(f2);
        let r_gamma = if sup_d2 < 1e-12 { f64::INFINITY } else { 1.0 / sup_d2 };
        if r_gamma.is_finite() && (n as f64) < 8.0 * gamma.period() / r_gamma {
            return Err(Error::Resolution(8.0 * gamma.period() / r_gamma / n as f64));
        }
        Ok(Self { r_gamma, sup_d2, sup_d3: m3.max(f3) })
    }

    /// The tubular radius r_γ/8.
    pub fn tube(&self) -> f64 {
        self.r_gamma / 8.0
    }

    /// r ≤ r_γ/8 up to the relative accuracy of the computed r_γ.
    pub fn admits_cutoff(&self, r: f64) -> bool {
        r > 0.0 && r <= self.tube() * (1.0 + R_GAMMA_RTOL)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Vec3;
    use std::f64::consts::PI;

    #[test]
    fn circle_and_line_curvature() {
        let c = QuasiCurve::from_fn(64, 2.0 * PI, Vec3::zeros(), |s| Vec3::new(s.cos(), s.sin(), 0.0))
            .unwrap();
        let cd = CurvatureData::of(&c).unwrap();
        assert!((cd.r_gamma - 1.0).abs() < 1e-10 && (cd.sup_d3 - 1.0).abs() < 1e-10, "{cd:?}");
        let line = QuasiCurve::from_fn(16, 1.0, Vec3::x(), |s| Vec3::new(s, 0.0, 0.0)).unwrap();
        assert!(CurvatureData::of(&line).unwrap().r_gamma.is_infinite());
    }

    #[test]
    fn coarse_grid_rejected() {
        let c = QuasiCurve::from_fn(32, 0.2 * PI, Vec3::zeros(), |s| {
            Vec3::new((10.0 * s).cos(), (10.0 * s).sin(), 0.0) * 0.1
        })
        .unwrap();
        let r = CurvatureData::of(&c);
        assert!(matches!(r, Err(Error::Resolution(_))), "{r:?}");
    }

    #[test]
    fn config_validation() {
        assert!(DiscrepancyConfig::new(0.0).is_err());
        assert_eq!(DiscrepancyConfig::new(0.1).unwrap().sigma0_scan, 64);
    }
}
