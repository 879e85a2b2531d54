use serde::Serialize;

use crate::curve::QuasiCurve;
use crate::Result;

use super::{f_functional, reparametrize, CurvatureData, Reparametrization};

/// Absolute slack granted to every inequality for rounding and quadrature.
pub const SLACK_ALLOWANCE: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct InequalityEntry {
    pub name: &'static str,
    pub applicable: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// rhs − lhs.
    pub slack: f64,
}

impl InequalityEntry {
    fn evaluated(name: &'static str, lhs: f64, rhs: f64) -> Self {
        Self { name, applicable: true, lhs, rhs, holds: lhs <= rhs + SLACK_ALLOWANCE, slack: rhs - lhs }
    }

    fn skipped(name: &'static str) -> Self {
        Self { name, applicable: false, lhs: f64::NAN, rhs: f64::NAN, holds: true, slack: f64::NAN }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InequalityReport {
    pub f: f64,
    pub sup_distance: f64,
    pub entries: Vec<InequalityEntry>,
}

impl InequalityReport {
    pub fn all_hold(&self) -> bool {
        self.entries.iter().all(|e| e.holds)
    }

    pub fn entry(&self, name: &str) -> Option<&InequalityEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

/// ∫₀^L |Γ′(s) − γ′((ℓ/L)s + c)|² ds.
fn tangent_gap(big_gamma: &QuasiCurve, gamma: &QuasiCurve, c: f64) -> Result<f64> {
    let dg = big_gamma.derivative_at_nodes(1)?;
    let slope = gamma.period() / big_gamma.period();
    let sum: f64 = (0..big_gamma.n())
        .map(|j| (dg[j] - gamma.jet(slope * big_gamma.node_parameter(j) + c).d1).norm_squared())
        .sum();
    Ok(sum * big_gamma.spacing())
}

/// Checks the four comparison inequalities between σ, the sup distance, the
/// tangent mismatch and F, each only when its hypotheses hold.
pub fn inequality_suite(
    big_gamma: &QuasiCurve,
    gamma: &QuasiCurve,
    sigma: &Reparametrization,
    r: f64,
    curvature: &CurvatureData,
    tol_newton: f64,
) -> Result<InequalityReport> {
    let big_l = big_gamma.period();
    let ell = gamma.period();
    let rg = curvature.r_gamma;
    let inv_rg = 1.0 / rg;
    let sup = sigma.sup_distance();
    let f = f_functional(big_gamma, gamma, sigma, r)?;
    let mut entries = Vec::with_capacity(4);

    let drift = (0..big_gamma.n())
        .map(|j| (sigma.samples()[j] - big_gamma.node_parameter(j) - sigma.sigma0()).abs())
        .fold(0.0, f64::max);
    entries.push(InequalityEntry::evaluated(
        "reparametrization_drift",
        drift,
        2.0 * big_l * inv_rg * sup + (big_l - ell).max(0.0),
    ));

    let c_r = 2f64.sqrt() * r + r * r / big_l;
    if r >= sup {
        entries.push(InequalityEntry::evaluated("sup_distance", sup * sup, c_r * f));
        let gap = tangent_gap(big_gamma, gamma, sigma.sigma0())?;
        let rhs = (4.0 + 16.0 * big_l.powi(3) * inv_rg.powi(4) * c_r) * f
            + 16.0 * big_l * inv_rg * inv_rg * (big_l - ell).powi(2);
        entries.push(InequalityEntry::evaluated("tangent_l2", gap, rhs));
    } else {
        entries.push(InequalityEntry::skipped("sup_distance"));
        entries.push(InequalityEntry::skipped("tangent_l2"));
    }

    let gap0 = tangent_gap(big_gamma, gamma, 0.0)?;
    let base_gap = (big_gamma.eval(0.0) - gamma.eval(0.0)).norm();
    let anchored = base_gap <= 1e-12 * gamma.eval(0.0).norm().max(1.0);
    if anchored && big_l.sqrt() * gap0.sqrt() + (big_l - ell).abs() < rg / 8.0 {
        let sigma_zero = reparametrize(gamma, big_gamma, 0.0, curvature, tol_newton)?;
        let f0 = f_functional(big_gamma, gamma, &sigma_zero, r)?;
        let rhs = (1.0 + 2.0 * big_l * big_l / (r * r) + 16.0 * big_l.powi(4) * inv_rg.powi(4)) * gap0
            + (2.0 / (r * r) + 8.0 * inv_rg * inv_rg + 16.0 * big_l * big_l * inv_rg.powi(4))
                * big_l
                * (big_l - ell).powi(2);
        entries.push(InequalityEntry::evaluated("f_upper", f0, rhs));
    } else {
        entries.push(InequalityEntry::skipped("f_upper"));
    }

    Ok(InequalityReport { f, sup_distance: sup, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Vec3;
    use std::f64::consts::PI;

    #[test]
    fn identical_curves_have_zero_lhs() {
        let c = QuasiCurve::from_fn(64, 2.0 * PI, Vec3::zeros(), |s| Vec3::new(s.cos(), s.sin(), 0.0)).unwrap();
        let cd = CurvatureData::of(&c).unwrap();
        let s = reparametrize(&c, &c, 0.0, &cd, 1e-12).unwrap();
        let rep = inequality_suite(&c, &c, &s, 0.1, &cd, 1e-12).unwrap();
        assert!(rep.all_hold());
        assert!(rep.entries.iter().all(|e| e.applicable && e.lhs.abs() < 1e-12));
    }
}
