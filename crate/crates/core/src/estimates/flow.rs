use nalgebra::Rotation3;

use crate::curve::{CurveJet, QuasiCurve, ARC_LENGTH_TOL};
use crate::discrepancy::CurvatureData;
use crate::kida::{HelixParams, KidaParams};
use crate::{Error, Result, Vec3};

/// Exact rigid-motion solution γ(t, s) = R(Ωt)γ₀(s − Ct) + tW, R a rotation about e₃.
#[derive(Debug, Clone)]
pub struct RigidFlow {
    profile: QuasiCurve,
    omega: f64,
    slip: f64,
    translation: Vec3,
    curvature: CurvatureData,
}

impl RigidFlow {
    /// The profile must be arc-length; with Ω ≠ 0 the translation must be along e₃
    /// so that rotation and translation commute.
    pub fn new(profile: QuasiCurve, omega: f64, slip: f64, translation: Vec3) -> Result<Self> {
        if !(omega.is_finite() && slip.is_finite() && translation.iter().all(|x| x.is_finite())) {
            return Err(Error::InvalidParameter("rigid motion parameters must be finite".into()));
        }
        if omega != 0.0 && translation.xy().norm() > 1e-14 * translation.norm().max(1.0) {
            return Err(Error::InvalidParameter("a rotating flow can only translate along e3".into()));
        }
        profile.arc_length_defect().and_then(|d| {
            if d > ARC_LENGTH_TOL {
                Err(Error::ArcLength(d))
            } else {
                Ok(())
            }
        })?;
        let curvature = CurvatureData::of(&profile)?;
        Ok(Self { profile, omega, slip, translation, curvature })
    }

    pub fn kida(params: &KidaParams, n: usize) -> Result<Self> {
        let mo = params.motion();
        Self::new(params.to_quasicurve(0.0, n)?, mo.omega, mo.slip, Vec3::z() * mo.speed)
    }

    /// Circle of radius ρ in the plane `frame`·{z = 0} centered at `center`,
    /// translating with speed 1/ρ along its normal.
    pub fn circle(n: usize, radius: f64, frame: Rotation3<f64>, center: Vec3) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter(format!("radius {radius} must be positive")));
        }
        let period = 2.0 * std::f64::consts::PI * radius;
        let profile = QuasiCurve::from_fn(n, period, Vec3::zeros(), |s| {
            center + frame * Vec3::new((s / radius).cos(), (s / radius).sin(), 0.0) * radius
        })?;
        Self::new(profile, 0.0, 0.0, frame * Vec3::z() / radius)
    }

    pub fn unit_circle(n: usize) -> Result<Self> {
        Self::circle(n, 1.0, Rotation3::identity(), Vec3::zeros())
    }

    pub fn helix(h: &HelixParams, n: usize) -> Result<Self> {
        let profile = QuasiCurve::from_fn(n, h.period(), h.pitch(), |s| h.point(s))?;
        Self::new(profile, 0.0, h.slip_speed(), Vec3::x() * h.translation_speed())
    }

    /// Stationary straight line s ↦ s·direction over a period ℓ.
    pub fn line(n: usize, period: f64, direction: Vec3) -> Result<Self> {
        let d = direction.normalize();
        let profile = QuasiCurve::from_fn(n, period, d * period, |s| d * s)?;
        Self::new(profile, 0.0, 0.0, Vec3::zeros())
    }

    pub fn profile(&self) -> &QuasiCurve {
        &self.profile
    }

    pub fn period(&self) -> f64 {
        self.profile.period()
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn slip(&self) -> f64 {
        self.slip
    }

    pub fn translation(&self) -> Vec3 {
        self.translation
    }

    /// Curvature data of every time slice, identical to the profile's.
    pub fn curvature(&self) -> &CurvatureData {
        &self.curvature
    }

    pub(crate) fn rotation(&self, t: f64) -> Rotation3<f64> {
        Rotation3::from_axis_angle(&Vec3::z_axis(), self.omega * t)
    }

    /// Positions and s-derivatives of γ(t, ·) at s.
    pub fn jet(&self, t: f64, s: f64) -> CurveJet {
        let rot = self.rotation(t);
        let j = self.profile.jet(s - self.slip * t);
        CurveJet { pos: rot * j.pos + self.translation * t, d1: rot * j.d1, d2: rot * j.d2, d3: rot * j.d3 }
    }

    /// ∂ₜγ(t, s).
    pub fn velocity(&self, t: f64, s: f64) -> Vec3 {
        let j = self.jet(t, s);
        -self.slip * j.d1 + self.omega * Vec3::z().cross(&j.pos) + self.translation
    }

    /// The slice γ(t, ·) resampled on the profile grid.
    pub fn curve_at(&self, t: f64) -> QuasiCurve {
        let rot = self.rotation(t);
        self.profile
            .shifted(-self.slip * t)
            .mapped(rot.matrix())
            .translated(self.translation * t)
            .with_arc_length_flag(self.profile.is_arc_length())
    }

    /// Body-frame point R(Ωt)ᵀ(x − tW), whose foot on γ₀ is the foot of x shifted by −Ct.
    pub(crate) fn to_body(&self, t: f64, x: Vec3) -> Vec3 {
        self.rotation(t).inverse() * (x - self.translation * t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kida::illposed_family;

    fn binormal_defect(flow: &RigidFlow, t: f64) -> f64 {
        (0..64)
            .map(|i| {
                let s = flow.period() * i as f64 / 64.0;
                let j = flow.jet(t, s);
                (flow.velocity(t, s) - j.d1.cross(&j.d2)).norm()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn rigid_flows_solve_binormal_flow() {
        let tilt = Rotation3::from_axis_angle(&Vec3::x_axis(), 0.3);
        let flows = [
            RigidFlow::unit_circle(64).unwrap(),
            RigidFlow::circle(64, 0.5, tilt, Vec3::new(1.0, 2.0, 0.0)).unwrap(),
            RigidFlow::helix(&HelixParams::new(0.1, 0.2).unwrap(), 64).unwrap(),
            RigidFlow::kida(&illposed_family(1.0, 5).unwrap(), 256).unwrap(),
        ];
        for f in &flows {
            assert!(binormal_defect(f, 0.37) < 1e-8, "{}", binormal_defect(f, 0.37));
        }
    }

    #[test]
    fn kida_flow_matches_closed_form() {
        let p = illposed_family(1.0, 5).unwrap();
        let flow = RigidFlow::kida(&p, 256).unwrap();
        for s in [0.0, 0.7, 3.1] {
            assert!((flow.jet(0.2, s).pos - p.eval_solution(s, 0.2)).norm() < 1e-10);
        }
    }

    #[test]
    fn slice_matches_jet() {
        let flow = RigidFlow::kida(&illposed_family(1.0, 5).unwrap(), 256).unwrap();
        let c = flow.curve_at(0.3);
        for j in [0, 17, 200] {
            assert!((c.node(j) - flow.jet(0.3, c.node_parameter(j)).pos).norm() < 1e-11);
        }
    }

    #[test]
    fn rotating_flow_rejects_sideways_translation() {
        let p = QuasiCurve::from_fn(16, 1.0, Vec3::x(), |s| Vec3::new(s, 0.0, 0.0)).unwrap();
        assert!(RigidFlow::new(p, 1.0, 0.0, Vec3::x()).is_err());
    }
}
