use rayon::prelude::*;

use crate::curve::QuasiCurve;
use crate::{Error, Result};

use super::{pitches_match, reparametrize, CurvatureData, DiscrepancyConfig, Reparametrization};

const REFINE_LEVELS: usize = 3;

/// f(d²) = 1 − d²/r² on [0, r²], zero beyond.
pub fn cutoff_profile(d2: f64, r: f64) -> f64 {
    (1.0 - d2 / (r * r)).max(0.0)
}

/// ∫₀^L 1 − f(|Γ − γ∘σ|²) γ′(σ)·Γ′ ds by the node rule.
pub fn f_functional(
    big_gamma: &QuasiCurve,
    gamma: &QuasiCurve,
    sigma: &Reparametrization,
    r: f64,
) -> Result<f64> {
    if sigma.samples().len() != big_gamma.n() {
        return Err(Error::LengthMismatch { expected: big_gamma.n(), got: sigma.samples().len() });
    }
    let dg = big_gamma.derivative_at_nodes(1)?;
    let sum: f64 = (0..big_gamma.n())
        .map(|j| {
            let jet = gamma.jet(sigma.samples()[j]);
            let d2 = (big_gamma.node(j) - jet.pos).norm_squared();
            1.0 - cutoff_profile(d2, r) * jet.d1.dot(&dg[j])
        })
        .sum();
    Ok(sum * big_gamma.spacing())
}

/// Smallest F over the projection-generated reparametrizations that a scan of
/// affine starting shifts can reach; infinite when none is admissible.
#[derive(Debug, Clone)]
pub struct FInfimum {
    pub value: f64,
    pub sigma: Option<Reparametrization>,
}

pub fn f_infimum(
    big_gamma: &QuasiCurve,
    gamma: &QuasiCurve,
    curvature: &CurvatureData,
    cfg: &DiscrepancyConfig,
) -> Result<FInfimum> {
    cfg.validate()?;
    let none = FInfimum { value: f64::INFINITY, sigma: None };
    if !pitches_match(big_gamma, gamma) {
        return Ok(none);
    }
    let ell = gamma.period();
    // scan window centred on the node of γ nearest to Γ(0), among the copies
    // shifted by one period either way
    let (a, start) = (gamma.pitch(), big_gamma.eval(0.0));
    let copies: &[f64] = if a.norm() > 1e-9 * ell { &[0.0, -1.0, 1.0] } else { &[0.0] };
    let centre = copies
        .iter()
        .flat_map(|&k| (0..gamma.n()).map(move |j| (k, j)))
        .map(|(k, j)| (gamma.node_parameter(j) + k * ell, (gamma.node(j) + a * k - start).norm_squared()))
        .fold((0.0, f64::INFINITY), |b, c| if c.1 < b.1 { c } else { b })
        .0;
    let mut count = cfg.sigma0_scan;
    for _ in 0..REFINE_LEVELS {
        let candidates: Vec<(f64, Reparametrization)> = (0..count)
            .into_par_iter()
            .filter_map(|i| {
                let p0 = centre - 0.5 * ell + ell * i as f64 / count as f64;
                let sigma = reparametrize(gamma, big_gamma, p0, curvature, cfg.tol_newton).ok()?;
                let value = f_functional(big_gamma, gamma, &sigma, cfg.r).ok()?;
                Some((value, sigma))
            })
            .collect();
        if let Some((value, sigma)) =
            candidates.into_iter().min_by(|a, b| a.0.total_cmp(&b.0))
        {
            return Ok(FInfimum { value, sigma: Some(sigma) });
        }
        count *= 4;
    }
    Ok(none)
}
