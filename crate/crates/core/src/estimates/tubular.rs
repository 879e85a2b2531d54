use serde::Serialize;

use crate::curve::{CurveJet, QuasiCurve};
use crate::discrepancy::{cutoff_profile, Projector};
use crate::{Error, Result, Vec3};

use super::RigidFlow;

/// Finite-difference step for ∂ₜX and D(curl X).
pub const FD_STEP: f64 = 1e-5;
/// Richardson extrapolation levels applied on top of the central difference.
pub const RICHARDSON_LEVELS: u32 = 1;

const FOOT_TOL: f64 = 1e-13;

/// Finite-difference settings echoed into reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FdSettings {
    pub step: f64,
    pub richardson_levels: u32,
}

impl Default for FdSettings {
    fn default() -> Self {
        Self { step: FD_STEP, richardson_levels: RICHARDSON_LEVELS }
    }
}

/// Central difference of `g` at 0 with one Richardson level.
pub(crate) fn richardson(h: f64, g: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let d = |h: f64| -> Result<f64> { Ok((g(h)? - g(-h)?) / (2.0 * h)) };
    let coarse = d(h)?;
    let fine = d(0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Foot point ζ of x on γ(t, ·) with the local jet there.
#[derive(Debug, Clone, Copy)]
pub struct Foot {
    pub zeta: f64,
    pub jet: CurveJet,
}

impl Foot {
    pub fn offset(&self, x: Vec3) -> Vec3 {
        x - self.jet.pos
    }
}

/// The cutoff tangent field X(t, x) = f(|x − γ(t,ζ)|²) ∂ₛγ(t, ζ) around a rigid flow.
///
/// ζ is found by Newton projection near a caller-supplied guess, so X is the
/// single-valued local branch selected by that guess.
#[derive(Debug, Clone, Copy)]
pub struct TubularField<'a> {
    flow: &'a RigidFlow,
    projector: Projector<'a>,
    r: f64,
}

impl<'a> TubularField<'a> {
    /// Requires 0 < r ≤ r_γ/8; r = ∞ is accepted only for a straight line.
    pub fn new(flow: &'a RigidFlow, r: f64) -> Result<Self> {
        let tube = flow.curvature().tube();
        if !flow.curvature().admits_cutoff(r) || (r.is_infinite() && tube.is_finite()) {
            return Err(Error::InvalidParameter(format!("cutoff r={r} must lie in (0, r_gamma/8 = {tube}]")));
        }
        Ok(Self { flow, projector: Projector::new(flow.profile(), flow.curvature(), FOOT_TOL), r })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn flow(&self) -> &RigidFlow {
        self.flow
    }

    /// Foot of x on γ(t, ·) within a quarter curvature radius of `guess`.
    pub fn foot(&self, t: f64, x: Vec3, guess: f64) -> Result<Foot> {
        let shift = self.flow.slip() * t;
        let y = self.flow.to_body(t, x);
        let xi = self.projector.project(guess - shift, y)?;
        let zeta = xi + shift;
        Ok(Foot { zeta, jet: self.flow.jet(t, zeta) })
    }

    /// A guess for the foot: the closest node of γ(t, ·).
    pub fn nearest_node(&self, t: f64, x: Vec3) -> f64 {
        let y = self.flow.to_body(t, x);
        let p = self.flow.profile();
        let best = (0..p.n())
            .map(|j| (j, (p.node(j) - y).norm_squared()))
            .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a })
            .0;
        p.node_parameter(best) + self.flow.slip() * t
    }

    pub fn value_at(&self, x: Vec3, foot: &Foot) -> Vec3 {
        let d2 = foot.offset(x).norm_squared();
        foot.jet.d1 * cutoff_profile(d2, self.r)
    }

    /// curl X = ∇f × γ′ + f (γ′ × γ″)/(1 − (x−γ)·γ″), with ∇f = −2(x − γ)/r².
    pub fn curl_at(&self, x: Vec3, foot: &Foot) -> Vec3 {
        let off = foot.offset(x);
        let f = cutoff_profile(off.norm_squared(), self.r);
        if f == 0.0 {
            return Vec3::zeros();
        }
        let j = &foot.jet;
        let grad_f = if self.r.is_finite() { off * (-2.0 / (self.r * self.r)) } else { Vec3::zeros() };
        grad_f.cross(&j.d1) + j.d1.cross(&j.d2) * (f / (1.0 - off.dot(&j.d2)))
    }

    pub fn value(&self, t: f64, x: Vec3, guess: f64) -> Result<Vec3> {
        Ok(self.value_at(x, &self.foot(t, x, guess)?))
    }

    pub fn curl(&self, t: f64, x: Vec3, guess: f64) -> Result<Vec3> {
        Ok(self.curl_at(x, &self.foot(t, x, guess)?))
    }

    /// ∂ₜX(t, x)·V with the foot re-solved at every time.
    pub fn dt_dot(&self, t: f64, x: Vec3, v: Vec3, guess: f64) -> Result<f64> {
        richardson(FD_STEP, |h| Ok(self.value(t + h, x, guess + self.flow.slip() * h)?.dot(&v)))
    }

    /// D(curl X)(x):(V⊗V), the derivative of (curl X)·V along V.
    pub fn dcurl_vv(&self, t: f64, x: Vec3, v: Vec3, guess: f64) -> Result<f64> {
        richardson(FD_STEP, |h| Ok(self.curl(t, x + v * h, guess)?.dot(&v)))
    }

    /// Feet of all nodes of `curve` on γ(t, ·), continued node to node.
    pub fn feet_along(&self, t: f64, curve: &QuasiCurve) -> Result<Vec<Foot>> {
        let step = self.flow.period() / curve.period() * curve.spacing();
        let mut out: Vec<Foot> = Vec::with_capacity(curve.n());
        for j in 0..curve.n() {
            let x = curve.node(j);
            let guess = out.last().map_or_else(|| self.nearest_node(t, x), |f| f.zeta + step);
            out.push(self.foot(t, x, guess)?);
        }
        Ok(out)
    }
}
