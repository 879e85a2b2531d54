use crate::curve::QuasiCurve;
use crate::{Error, Result};

use super::{CurvatureData, Projector};

/// σ sampled at the nodes of Γ, with σ(s + L) = σ(s) + ℓ.
#[derive(Debug, Clone, PartialEq)]
pub struct Reparametrization {
    sigma: Vec<f64>,
    big_period: f64,
    period: f64,
    sup_distance: f64,
}

impl Reparametrization {
    pub fn samples(&self) -> &[f64] {
        &self.sigma
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma[0]
    }

    /// Period L of Γ.
    pub fn big_period(&self) -> f64 {
        self.big_period
    }

    /// Period ℓ of γ.
    pub fn period(&self) -> f64 {
        self.period
    }

    /// ‖Γ − γ∘σ‖_∞ over the nodes.
    pub fn sup_distance(&self) -> f64 {
        self.sup_distance
    }

    /// σ at node index j of any integer, using σ(s + L) = σ(s) + ℓ.
    pub fn at_node(&self, j: i64) -> f64 {
        let n = self.sigma.len() as i64;
        let (q, r) = (j.div_euclid(n), j.rem_euclid(n));
        self.sigma[r as usize] + q as f64 * self.period
    }

    /// Central-difference σ′ at the nodes.
    pub fn derivative(&self) -> Vec<f64> {
        let h = self.big_period / self.sigma.len() as f64;
        (0..self.sigma.len() as i64).map(|j| (self.at_node(j + 1) - self.at_node(j - 1)) / (2.0 * h)).collect()
    }

    /// Largest |(Γ(s_j) − γ(σ_j))·γ′(σ_j)|.
    pub fn orthogonality_defect(&self, gamma: &QuasiCurve, big_gamma: &QuasiCurve) -> f64 {
        self.sigma
            .iter()
            .enumerate()
            .map(|(j, &x)| {
                let jet = gamma.jet(x);
                (big_gamma.node(j) - jet.pos).dot(&jet.d1).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Projection-generated σ started from the affine guess p(s) = (ℓ/L)s + p0.
pub fn reparametrize(
    gamma: &QuasiCurve,
    big_gamma: &QuasiCurve,
    p0: f64,
    curvature: &CurvatureData,
    tol: f64,
) -> Result<Reparametrization> {
    let slope = gamma.period() / big_gamma.period();
    let p: Vec<f64> = (0..big_gamma.n()).map(|j| slope * big_gamma.node_parameter(j) + p0).collect();
    reparametrize_from(gamma, big_gamma, &p, curvature, tol)
}

/// Projection-generated σ from samples of any admissible p at the nodes of Γ.
///
/// Each projection is centered at p(s_j) and warm-started from the previous
/// node's result.
pub fn reparametrize_from(
    gamma: &QuasiCurve,
    big_gamma: &QuasiCurve,
    p: &[f64],
    curvature: &CurvatureData,
    tol: f64,
) -> Result<Reparametrization> {
    if p.len() != big_gamma.n() {
        return Err(Error::LengthMismatch { expected: big_gamma.n(), got: p.len() });
    }
    let projector = Projector::new(gamma, curvature, tol);
    let step = gamma.period() / big_gamma.n() as f64;
    let mut sigma = Vec::with_capacity(p.len());
    let mut sup: f64 = 0.0;
    let limit = curvature.tube();
    for (j, &center) in p.iter().enumerate() {
        let x = big_gamma.node(j);
        let start = sigma.last().map_or(center, |s: &f64| s + step);
        let xi = projector.project_from(center, start, x)?;
        let d = (x - gamma.eval(xi)).norm();
        if !(d < limit) {
            return Err(Error::Proximity { distance: d, limit });
        }
        sup = sup.max(d);
        sigma.push(xi);
    }
    Ok(Reparametrization { sigma, big_period: big_gamma.period(), period: gamma.period(), sup_distance: sup })
}
