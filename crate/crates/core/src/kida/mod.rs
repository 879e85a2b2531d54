//! Kida's rigid-motion solutions of the binormal flow, the simple helix, and
//! the one-parameter family used to exhibit drift.

mod helix;

pub use helix::{helix_pitch_parameter, simple_helix, HelixParams, HelixSolution};

use std::f64::consts::PI;

use nalgebra::{Matrix3, Rotation3};
use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{QuasiCurve, SphereField, ARC_LENGTH_TOL};
use crate::elliptic::{EllipticModulus, K_MAX};
use crate::{Error, Result, Vec3};

const CLOSURE_TOL: f64 = 1e-8;

/// Rigid motion ∂ₜγ = −C∂ₛγ + Ω e₃×γ + V e₃.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RigidMotion {
    pub omega: f64,
    pub slip: f64,
    pub speed: f64,
}

/// Parameters of one Kida solution.
///
/// The algebraic values (α, β, δ, A, V, Ω, C, T_R, ℓ) describe the solution
/// in its native frame. A homothety factor and an optional mirror
/// (x, y, z, t) ↦ (x, y, −z, −t) are applied on evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KidaParams {
    alpha: f64,
    beta: f64,
    delta: f64,
    m: u32,
    modulus: EllipticModulus,
    characteristic: f64,
    a: f64,
    v: f64,
    omega: f64,
    c: f64,
    t_r: f64,
    ell: f64,
    theta_coef: f64,
    k_big: f64,
    e_big: f64,
    pi_big: f64,
    theta0: f64,
    z0: f64,
    scale: f64,
    mirrored: bool,
}

struct Chain {
    modulus: EllipticModulus,
    n: f64,
    k_big: f64,
    pi_big: f64,
    v_over_omega: f64,
    a: f64,
    g: f64,
}

fn check_domain(alpha: f64, beta: f64, delta: f64, m: u32) -> Result<()> {
    let finite = alpha.is_finite() && beta.is_finite() && delta.is_finite();
    if !finite || !(beta > 0.0 && beta <= alpha && delta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < beta <= alpha and delta > 0, got alpha={alpha}, beta={beta}, delta={delta}"
        )));
    }
    if m < 2 {
        return Err(Error::InvalidParameter(format!("winding m={m} must be at least 2")));
    }
    Ok(())
}

fn chain(alpha: f64, beta: f64, delta: f64, m: u32) -> Result<Chain> {
    check_domain(alpha, beta, delta, m)?;
    let k2 = (alpha - beta) / (alpha + delta);
    if k2.sqrt() > K_MAX {
        return Err(Error::Modulus(k2.sqrt()));
    }
    let modulus = EllipticModulus::new(k2.sqrt())?;
    let n = (alpha - beta) / alpha;
    let k_big = modulus.complete_k();
    let pi_big = modulus.complete_pi(n)?;
    let sad = (alpha + delta).sqrt();
    let b = 2.0 * PI / m as f64 - 2.0 * (beta * delta).sqrt() / (alpha.sqrt() * sad) * pi_big;
    let v_over_omega = b * sad / (2.0 * k_big);
    let a = 0.5 * (alpha + beta - delta + v_over_omega * v_over_omega);
    let g = a * a + 2.0 * (alpha * beta * delta).sqrt() * v_over_omega - alpha * beta
        + alpha * delta
        + beta * delta;
    Ok(Chain { modulus, n, k_big, pi_big, v_over_omega, a, g })
}

/// g(α, β, δ) from the closure-constrained parameter chain; Ω² g = 4.
pub fn g_function(alpha: f64, beta: f64, delta: f64, m: u32) -> Result<f64> {
    Ok(chain(alpha, beta, delta, m)?.g)
}

/// g at (1, 1−ε, 1/(m²−1)) written directly in terms of ε and m.
pub fn g_one_parameter(eps: f64, m: u32) -> Result<f64> {
    if !(0.0..1.0).contains(&eps) || m < 2 {
        return Err(Error::InvalidParameter(format!("need 0 <= eps < 1 and m >= 2, got {eps}, {m}")));
    }
    let mf = m as f64;
    let d = 1.0 / (mf * mf - 1.0);
    let modulus = EllipticModulus::new((eps * (mf * mf - 1.0) / (mf * mf)).sqrt())?;
    let root = (1.0 - eps).sqrt();
    let q = (PI - root * modulus.complete_pi(eps)?) / modulus.complete_k();
    let q2 = q * q - 1.0;
    Ok(4.0 * d + eps * eps / 4.0 - eps * d
        + 0.25 * d * d * q2 * q2
        + 0.5 * (2.0 - eps) * d * q2
        + 2.0 * d * (q * root - 1.0))
}

/// Solves the parameter chain for the positive-Ω branch.
pub fn derive_params(alpha: f64, beta: f64, delta: f64, m: u32) -> Result<KidaParams> {
    let ch = chain(alpha, beta, delta, m)?;
    if !(ch.g > 0.0) {
        return Err(Error::NonPositiveG(ch.g));
    }
    let omega = 2.0 / ch.g.sqrt();
    let v = ch.v_over_omega * omega;
    let c = 0.5 * ch.a * v * omega + 0.5 * omega * omega * (alpha * beta * delta).sqrt();
    let sad = (alpha + delta).sqrt();
    let t_r = 4.0 * ch.k_big / (sad * omega);
    let theta_coef = (2.0 * c - ch.a * v * omega) / (alpha * sad * omega * omega);
    let params = KidaParams {
        alpha,
        beta,
        delta,
        m,
        modulus: ch.modulus,
        characteristic: ch.n,
        a: ch.a,
        v,
        omega,
        c,
        t_r,
        ell: m as f64 * t_r,
        theta_coef,
        k_big: ch.k_big,
        e_big: ch.modulus.complete_e(),
        pi_big: ch.pi_big,
        theta0: 0.0,
        z0: 0.0,
        scale: 1.0,
        mirrored: false,
    };
    let defect = (params.closure_increment() - 2.0 * PI / m as f64).abs();
    if !(defect <= CLOSURE_TOL) {
        return Err(Error::Closure(defect));
    }
    Ok(params)
}

/// The translating circle family α = β = 1, δ = 1/(m²−1).
pub fn base_family(m: u32) -> Result<KidaParams> {
    let mf = m as f64;
    derive_params(1.0, 1.0, 1.0 / (mf * mf - 1.0), m)
}

/// ε(m) = |σ̃| m^{−3/2}.
pub fn illposed_eps(sigma_tilde: f64, m: u32) -> f64 {
    sigma_tilde.abs() * (m as f64).powf(-1.5)
}

/// Member (1, 1−ε(m), 1/(m²−1), m) of the drift family.
///
/// Negative σ̃ gives the mirror image of the |σ̃| member, whose drift has the
/// opposite sign.
pub fn illposed_family(sigma_tilde: f64, m: u32) -> Result<KidaParams> {
    if !sigma_tilde.is_finite() {
        return Err(Error::InvalidParameter(format!("sigma_tilde={sigma_tilde}")));
    }
    let eps = illposed_eps(sigma_tilde, m);
    if !(eps < 1.0) {
        return Err(Error::InvalidParameter(format!("eps={eps} must be below 1 (m too small)")));
    }
    let mf = m as f64;
    let p = derive_params(1.0, 1.0 - eps, 1.0 / (mf * mf - 1.0), m)?;
    Ok(if sigma_tilde < 0.0 { p.mirrored() } else { p })
}

/// Ω − C in the evaluation frame.
pub fn drift(params: &KidaParams) -> f64 {
    let mo = params.motion();
    mo.omega - mo.slip
}

impl KidaParams {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn k(&self) -> f64 {
        self.modulus.k()
    }
    /// Integration constant A.
    pub fn a(&self) -> f64 {
        self.a
    }
    /// Native-frame translation speed V.
    pub fn v(&self) -> f64 {
        self.v
    }
    /// Native-frame angular speed Ω.
    pub fn omega(&self) -> f64 {
        self.omega
    }
    /// Native-frame slipping speed C.
    pub fn c(&self) -> f64 {
        self.c
    }
    /// Native-frame R-period T_R.
    pub fn t_r(&self) -> f64 {
        self.t_r
    }
    /// Native-frame curve period ℓ = m T_R.
    pub fn ell(&self) -> f64 {
        self.ell
    }
    pub fn scale(&self) -> f64 {
        self.scale
    }
    pub fn is_mirrored(&self) -> bool {
        self.mirrored
    }

    pub fn with_phases(mut self, theta0: f64, z0: f64) -> Self {
        self.theta0 = theta0;
        self.z0 = z0;
        self
    }

    /// Composes with the homothety x ↦ λx (times scale by λ²).
    pub fn scaled(mut self, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("scale {lambda} must be positive")));
        }
        self.scale *= lambda;
        Ok(self)
    }

    /// Rescales so that the curve period is exactly 2π.
    pub fn rescaled_to_2pi(self) -> Self {
        let lambda = 2.0 * PI / self.period();
        self.scaled(lambda).expect("period is positive")
    }

    pub fn mirrored(mut self) -> Self {
        self.mirrored = !self.mirrored;
        self
    }

    /// Curve period in the evaluation frame.
    pub fn period(&self) -> f64 {
        self.scale * self.ell
    }

    /// Rigid-motion parameters in the evaluation frame.
    pub fn motion(&self) -> RigidMotion {
        let l = self.scale;
        let sign = if self.mirrored { -1.0 } else { 1.0 };
        RigidMotion { omega: sign * self.omega / (l * l), slip: sign * self.c / l, speed: self.v / l }
    }

    fn kappa(&self) -> f64 {
        0.5 * (self.alpha + self.delta).sqrt() * self.omega
    }

    /// θ(T_R) − θ(0), which closure requires to equal 2π/m.
    pub fn closure_increment(&self) -> f64 {
        0.5 * self.v * self.t_r + self.theta_coef * 2.0 * self.pi_big
    }

    /// Squared distance to the axis, R(s), native frame.
    pub fn radius_squared(&self, s: f64) -> f64 {
        let (sn, _, _) = self.modulus.sn_cn_dn(self.kappa() * s);
        self.alpha + (self.beta - self.alpha) * sn * sn
    }

    /// Polar angle θ(s), native frame.
    pub fn theta(&self, s: f64) -> f64 {
        let pi = self
            .modulus
            .incomplete_pi(self.kappa() * s, self.characteristic)
            .expect("characteristic below one");
        self.theta0 + 0.5 * self.v * s + self.theta_coef * pi
    }

    /// Height z(s), native frame.
    pub fn height(&self, s: f64) -> f64 {
        let sad = (self.alpha + self.delta).sqrt();
        self.z0 + 0.5 * self.omega * (self.a + self.delta) * s
            - sad * self.modulus.incomplete_e(self.kappa() * s)
    }

    fn native_point(&self, s: f64) -> Vec3 {
        let r = self.radius_squared(s).sqrt();
        let th = self.theta(s);
        Vec3::new(r * th.cos(), r * th.sin(), self.height(s))
    }

    fn native_tangent(&self, s: f64) -> Vec3 {
        let kappa = self.kappa();
        let (sn, cn, dn) = self.modulus.sn_cn_dn(kappa * s);
        let rr = self.alpha + (self.beta - self.alpha) * sn * sn;
        let r = rr.sqrt();
        let dr = 2.0 * (self.beta - self.alpha) * sn * cn * dn * kappa;
        let c0 = self.c - 0.5 * self.a * self.v * self.omega;
        let dtheta = 0.5 * self.v + c0 / (self.omega * rr);
        let th = self.theta(s);
        let (st, ct) = th.sin_cos();
        let radial = dr / (2.0 * r);
        Vec3::new(
            radial * ct - r * dtheta * st,
            radial * st + r * dtheta * ct,
            0.5 * self.omega * (self.a - rr),
        )
    }

    fn native_solution(&self, s: f64, t: f64) -> Vec3 {
        let p = self.native_point(s - self.c * t);
        Rotation3::from_axis_angle(&Vec3::z_axis(), self.omega * t) * p + Vec3::z() * (self.v * t)
    }

    fn frame(&self) -> Matrix3<f64> {
        let z = if self.mirrored { -1.0 } else { 1.0 };
        Matrix3::from_diagonal(&Vec3::new(self.scale, self.scale, z * self.scale))
    }

    fn native_time(&self, t: f64) -> f64 {
        let sign = if self.mirrored { -1.0 } else { 1.0 };
        sign * t / (self.scale * self.scale)
    }

    /// γ(s, t) in the evaluation frame.
    pub fn eval_solution(&self, s: f64, t: f64) -> Vec3 {
        self.frame() * self.native_solution(s / self.scale, self.native_time(t))
    }

    /// ∂ₛγ(s, t) in the evaluation frame.
    pub fn tangent(&self, s: f64, t: f64) -> Vec3 {
        let nt = self.native_time(t);
        let d = self.native_tangent(s / self.scale - self.c * nt);
        let rot = Rotation3::from_axis_angle(&Vec3::z_axis(), self.omega * nt) * d;
        self.frame() * rot / self.scale
    }

    /// Pitch of the curve over one period, always along e₃.
    pub fn pitch(&self) -> Vec3 {
        let sad = (self.alpha + self.delta).sqrt();
        let dz = 0.5 * self.omega * (self.a + self.delta) * self.t_r - 2.0 * sad * self.e_big;
        let z = if self.mirrored { -1.0 } else { 1.0 };
        Vec3::z() * (z * self.scale * self.m as f64 * dz)
    }

    /// Samples γ(·, t) on N nodes and checks arc-length parametrization.
    pub fn to_quasicurve(&self, t: f64, n: usize) -> Result<QuasiCurve> {
        let period = self.period();
        QuasiCurve::from_fn(n, period, self.pitch(), |s| self.eval_solution(s, t))?
            .into_arc_length(ARC_LENGTH_TOL)
    }

    /// Unit tangent ∂ₛγ(·, t) on N nodes, from the closed-form derivative.
    pub fn tangent_field(&self, t: f64, n: usize) -> Result<SphereField> {
        SphereField::from_fn(n, self.period(), |s| self.tangent(s, t))
    }
}

/// One row of the parameter table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KidaRow {
    pub m: u32,
    pub eps: f64,
    pub k: f64,
    pub omega: f64,
    pub c: f64,
    pub v: f64,
    pub a: f64,
    pub ell: f64,
    pub drift: f64,
}

impl KidaRow {
    pub fn new(eps: f64, p: &KidaParams) -> Self {
        let mo = p.motion();
        KidaRow {
            m: p.m,
            eps,
            k: p.k(),
            omega: mo.omega,
            c: mo.slip,
            v: mo.speed,
            a: p.a,
            ell: p.period(),
            drift: drift(p),
        }
    }
}

/// Parameter table of the drift family over the given windings, in parallel.
pub fn family_table(sigma_tilde: f64, ms: &[u32], rescale: bool) -> Result<Vec<KidaRow>> {
    ms.par_iter()
        .map(|&m| {
            let p = illposed_family(sigma_tilde, m)?;
            let p = if rescale { p.rescaled_to_2pi() } else { p };
            Ok(KidaRow::new(illposed_eps(sigma_tilde, m), &p))
        })
        .collect()
}
