use std::f64::consts::PI;

use nalgebra::Matrix3;
use rustfft::num_complex::Complex64;

use super::field::check_grid;
use super::spectral::SpectralWorkspace;
use crate::{Error, Result, Vec3};

/// Relative tolerance on |Γ′| for curves flagged as arc-length parametrized.
pub const ARC_LENGTH_TOL: f64 = 1e-6;

const REANCHOR: usize = 64;

/// Position and first three derivatives of a curve at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveJet {
    pub pos: Vec3,
    pub d1: Vec3,
    pub d2: Vec3,
    pub d3: Vec3,
}

/// Γ(s) = (a/L)s + P(s) with P periodic of period L, P sampled on N nodes.
#[derive(Debug, Clone)]
pub struct QuasiCurve {
    pitch: Vec3,
    period: f64,
    periodic: Vec<Vec3>,
    // one-sided normalized spectrum, indices 0..=N/2
    coeffs: Vec<[Complex64; 3]>,
    arc_length: bool,
}

impl QuasiCurve {
    pub fn new(pitch: Vec3, period: f64, periodic: Vec<Vec3>) -> Result<Self> {
        check_grid(periodic.len(), period)?;
        if !(pitch.iter().all(|x| x.is_finite()) && periodic.iter().flatten().all(|x| x.is_finite()))
        {
            return Err(Error::InvalidParameter("curve data must be finite".into()));
        }
        let ws = SpectralWorkspace::new(periodic.len(), period)?;
        let n = periodic.len();
        let comps: Vec<Vec<Complex64>> =
            (0..3).map(|c| ws.coefficients(&periodic.iter().map(|v| v[c]).collect::<Vec<_>>())).collect();
        let coeffs = (0..=n / 2).map(|k| [comps[0][k], comps[1][k], comps[2][k]]).collect();
        Ok(Self { pitch, period, periodic, coeffs, arc_length: false })
    }

    /// Builds a curve from node positions Γ(s_j) and its pitch.
    pub fn from_points(points: &[Vec3], period: f64, pitch: Vec3) -> Result<Self> {
        check_grid(points.len(), period)?;
        let h = period / points.len() as f64;
        let slope = pitch / period;
        let periodic = points.iter().enumerate().map(|(j, p)| p - slope * (j as f64 * h)).collect();
        Self::new(pitch, period, periodic)
    }

    /// Samples a quasiperiodic function at N nodes.
    pub fn from_fn(n: usize, period: f64, pitch: Vec3, f: impl Fn(f64) -> Vec3) -> Result<Self> {
        check_grid(n, period)?;
        let h = period / n as f64;
        let points: Vec<Vec3> = (0..n).map(|j| f(j as f64 * h)).collect();
        Self::from_points(&points, period, pitch)
    }

    pub fn pitch(&self) -> Vec3 {
        self.pitch
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn n(&self) -> usize {
        self.periodic.len()
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.n() as f64
    }

    pub fn periodic_part(&self) -> &[Vec3] {
        &self.periodic
    }

    pub fn is_arc_length(&self) -> bool {
        self.arc_length
    }

    pub fn node_parameter(&self, j: usize) -> f64 {
        j as f64 * self.spacing()
    }

    /// Γ(s_j), exact at nodes.
    pub fn node(&self, j: usize) -> Vec3 {
        self.pitch / self.period * self.node_parameter(j) + self.periodic[j]
    }

    pub fn node_points(&self) -> Vec<Vec3> {
        (0..self.n()).map(|j| self.node(j)).collect()
    }

    /// Spectral derivative of Γ at the nodes.
    pub fn derivative_at_nodes(&self, order: u32) -> Result<Vec<Vec3>> {
        let ws = SpectralWorkspace::new(self.n(), self.period)?;
        let mut d = ws.derivative_vec3(&self.periodic, order)?;
        if order == 1 {
            let slope = self.pitch / self.period;
            d.iter_mut().for_each(|v| *v += slope);
        }
        Ok(d)
    }

    /// Largest deviation of |Γ′| from 1 over the nodes.
    pub fn arc_length_defect(&self) -> Result<f64> {
        Ok(self.derivative_at_nodes(1)?.iter().map(|v| (v.norm() - 1.0).abs()).fold(0.0, f64::max))
    }

    /// Flags the curve as arc-length parametrized after checking |Γ′| ≈ 1.
    pub fn into_arc_length(mut self, tol: f64) -> Result<Self> {
        let defect = self.arc_length_defect()?;
        if !(defect <= tol) {
            return Err(Error::ArcLength(defect));
        }
        self.arc_length = true;
        Ok(self)
    }

    pub(crate) fn with_arc_length_flag(mut self, flag: bool) -> Self {
        self.arc_length = flag;
        self
    }

    /// Trigonometric interpolant plus the linear part, at any real s.
    pub fn eval(&self, s: f64) -> Vec3 {
        let n = self.n();
        let q = (s / self.spacing()).round();
        if q.abs() < 1e15 && q * self.spacing() == s {
            let j = (q as i64).rem_euclid(n as i64) as usize;
            return self.pitch / self.period * s + self.periodic[j];
        }
        let base = 2.0 * PI / self.period;
        let mut out = Vec3::new(self.coeffs[0][0].re, self.coeffs[0][1].re, self.coeffs[0][2].re);
        let mut acc = [Complex64::new(0.0, 0.0); 3];
        let mut z = Complex64::new(1.0, 0.0);
        let w = Complex64::from_polar(1.0, base * s);
        for k in 1..n / 2 {
            z = if k % REANCHOR == 0 { Complex64::from_polar(1.0, base * s * k as f64) } else { z * w };
            for c in 0..3 {
                acc[c] += self.coeffs[k][c] * z;
            }
        }
        let nyq = (base * s * (n / 2) as f64).cos();
        for c in 0..3 {
            out[c] += 2.0 * acc[c].re + self.coeffs[n / 2][c].re * nyq;
        }
        out + self.pitch / self.period * s
    }

    /// Position and derivatives up to third order.
    pub fn jet(&self, s: f64) -> CurveJet {
        let n = self.n();
        let base = 2.0 * PI / self.period;
        let mut acc = [[Complex64::new(0.0, 0.0); 3]; 4];
        let mut z = Complex64::new(1.0, 0.0);
        let w = Complex64::from_polar(1.0, base * s);
        for k in 1..n / 2 {
            z = if k % REANCHOR == 0 { Complex64::from_polar(1.0, base * s * k as f64) } else { z * w };
            let ik = Complex64::new(0.0, base * k as f64);
            let mut m = Complex64::new(1.0, 0.0);
            for order in acc.iter_mut() {
                for c in 0..3 {
                    order[c] += self.coeffs[k][c] * z * m;
                }
                m *= ik;
            }
        }
        let kn = base * (n / 2) as f64;
        let (sn, cn) = (kn * s).sin_cos();
        let nyq = [cn, -kn * sn, -kn * kn * cn, kn * kn * kn * sn];
        let mut out = [Vec3::zeros(); 4];
        for (p, v) in out.iter_mut().enumerate() {
            for c in 0..3 {
                v[c] = 2.0 * acc[p][c].re + self.coeffs[n / 2][c].re * nyq[p];
            }
        }
        let slope = self.pitch / self.period;
        out[0] += Vec3::new(self.coeffs[0][0].re, self.coeffs[0][1].re, self.coeffs[0][2].re) + slope * s;
        out[1] += slope;
        CurveJet { pos: out[0], d1: out[1], d2: out[2], d3: out[3] }
    }

    pub fn translated(&self, v: Vec3) -> Self {
        let periodic = self.periodic.iter().map(|p| p + v).collect();
        Self::new(self.pitch, self.period, periodic)
            .expect("translation preserves validity")
            .with_arc_length_flag(self.arc_length)
    }

    /// Image under x ↦ Mx, same parametrization.
    pub fn mapped(&self, m: &Matrix3<f64>) -> Self {
        let periodic = self.periodic.iter().map(|p| m * p).collect();
        Self::new(m * self.pitch, self.period, periodic).expect("linear image preserves validity")
    }

    /// λΓ(s/λ): homothety that keeps arc-length parametrization.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameter(format!("scale {lambda} must be positive")));
        }
        let periodic = self.periodic.iter().map(|p| p * lambda).collect();
        Ok(Self::new(self.pitch * lambda, self.period * lambda, periodic)?
            .with_arc_length_flag(self.arc_length))
    }

    /// s ↦ Γ(s + c), resampled on the same grid.
    pub fn shifted(&self, c: f64) -> Self {
        let ws = SpectralWorkspace::new(self.n(), self.period).expect("valid grid");
        let mut periodic = ws.shift_vec3(&self.periodic, c).expect("matching length");
        let offset = self.pitch / self.period * c;
        periodic.iter_mut().for_each(|p| *p += offset);
        Self::new(self.pitch, self.period, periodic)
            .expect("shift preserves validity")
            .with_arc_length_flag(self.arc_length)
    }

    /// Resamples the interpolant on a finer or coarser power-of-two grid.
    pub fn resampled(&self, n: usize) -> Result<Self> {
        check_grid(n, self.period)?;
        let h = self.period / n as f64;
        let slope = self.pitch / self.period;
        let periodic = (0..n).map(|j| self.eval(j as f64 * h) - slope * (j as f64 * h)).collect();
        Ok(Self::new(self.pitch, self.period, periodic)?.with_arc_length_flag(self.arc_length))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn circle(n: usize) -> QuasiCurve {
        QuasiCurve::from_fn(n, 2.0 * PI, Vec3::zeros(), |s| Vec3::new(s.cos(), s.sin(), 0.0)).unwrap()
    }

    #[test]
    fn nodes_are_exact() {
        let c = QuasiCurve::from_fn(16, 3.0, Vec3::new(0.5, 0.0, 1.0), |s| {
            Vec3::new((2.0 * PI * s / 3.0).sin() + s / 6.0, 0.3, s / 3.0)
        })
        .unwrap();
        for j in 0..16 {
            let s = c.node_parameter(j);
            assert_eq!(c.node(j), c.periodic_part()[j] + c.pitch() / 3.0 * s);
            assert!((c.eval(s) - c.node(j)).norm() < 1e-13);
        }
    }

    #[test]
    fn circle_off_node() {
        let c = circle(32);
        let s = PI / 3.0;
        assert!((c.eval(s) - Vec3::new(s.cos(), s.sin(), 0.0)).norm() < 1e-12);
        let j = c.jet(s);
        assert!((j.d1 - Vec3::new(-s.sin(), s.cos(), 0.0)).norm() < 1e-12);
        assert!((j.d2 + Vec3::new(s.cos(), s.sin(), 0.0)).norm() < 1e-12);
        assert!((j.d3 - Vec3::new(s.sin(), -s.cos(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn helix_off_node() {
        let (eps, p) = (0.4_f64, 0.9_f64);
        let r = (eps * eps + p * p).sqrt();
        let helix = |s: f64| Vec3::new(p * s / r, eps * (s / r).cos(), eps * (s / r).sin());
        let c = QuasiCurve::from_fn(512, 2.0 * PI * r, Vec3::new(2.0 * PI * p, 0.0, 0.0), helix)
            .unwrap()
            .into_arc_length(ARC_LENGTH_TOL)
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let s: f64 = rng.random_range(-20.0..20.0);
            assert!((c.eval(s) - helix(s)).norm() < 1e-10);
        }
    }

    #[test]
    fn quasiperiodicity_and_zero_mean_derivative() {
        let c = QuasiCurve::from_fn(64, 5.0, Vec3::new(1.0, -2.0, 0.5), |s| {
            let t = 2.0 * PI * s / 5.0;
            Vec3::new(s / 5.0 + t.sin(), -0.4 * s + (2.0 * t).cos(), 0.1 * s + t.cos() * t.sin())
        })
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let s: f64 = rng.random_range(-10.0..10.0);
            assert!((c.eval(s + 5.0) - c.eval(s) - c.pitch()).norm() < 1e-12);
        }
        let ws = SpectralWorkspace::new(64, 5.0).unwrap();
        for order in 1..=4 {
            let d = ws.derivative_vec3(c.periodic_part(), order).unwrap();
            assert!(ws.integrate_vec3(&d).norm() < 1e-12);
        }
    }

    #[test]
    fn arc_length_flag_checks() {
        let line =
            QuasiCurve::from_fn(16, 1.0, Vec3::new(2.0, 0.0, 0.0), |s| Vec3::new(2.0 * s, 0.0, 0.0)).unwrap();
        assert!(matches!(line.into_arc_length(ARC_LENGTH_TOL), Err(Error::ArcLength(_))));
        assert!(circle(256).into_arc_length(ARC_LENGTH_TOL).is_ok());
    }

    #[test]
    fn shift_and_scale() {
        let c = circle(32);
        let d = c.shifted(0.5);
        assert!((d.eval(1.0) - c.eval(1.5)).norm() < 1e-12);
        let big = c.scaled(2.0).unwrap();
        assert!((big.eval(1.0) - c.eval(0.5) * 2.0).norm() < 1e-12);
        assert!((big.period() - 4.0 * PI).abs() < 1e-15);
    }
}
