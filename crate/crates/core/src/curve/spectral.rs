use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::{is_grid_size, Error, Result, Vec3};

/// FFT plans and wavenumber tables for one grid size and period.
///
/// All operators act on the trigonometric interpolant of the node values.
/// The Nyquist mode is treated as a cosine: odd derivatives annihilate it at
/// the nodes, even derivatives keep it with a real multiplier.
#[derive(Clone)]
pub struct SpectralWorkspace {
    n: usize,
    period: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    wavenumbers: Vec<f64>,
}

impl std::fmt::Debug for SpectralWorkspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralWorkspace")
            .field("n", &self.n)
            .field("period", &self.period)
            .finish()
    }
}

impl SpectralWorkspace {
    pub fn new(n: usize, period: f64) -> Result<Self> {
        if !is_grid_size(n) {
            return Err(Error::GridSize(n));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidParameter(format!("period {period} must be positive")));
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let base = 2.0 * PI / period;
        let wavenumbers = (0..n)
            .map(|j| {
                let k = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
                base * k
            })
            .collect();
        Ok(Self { n, period, forward, inverse, wavenumbers })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Grid spacing ℓ/N.
    pub fn spacing(&self) -> f64 {
        self.period / self.n as f64
    }

    /// Node positions s_j = jℓ/N.
    pub fn nodes(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.n).map(|j| j as f64 * h).collect()
    }

    /// Signed wavenumber of storage index `j` (Nyquist reported as positive).
    pub fn wavenumber(&self, j: usize) -> f64 {
        self.wavenumbers[j]
    }

    /// Unnormalized forward DFT of complex data.
    pub fn forward_complex(&self, data: &mut [Complex64]) {
        self.forward.process(data);
    }

    /// Inverse DFT including the 1/N normalization.
    pub fn inverse_complex(&self, data: &mut [Complex64]) {
        self.inverse.process(data);
        let scale = 1.0 / self.n as f64;
        data.iter_mut().for_each(|c| *c *= scale);
    }

    /// Normalized Fourier coefficients c_j with f(s_i) = Σ c_j e^{iκ_j s_i}.
    pub fn coefficients(&self, data: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = data.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        buf
    }

    /// Applies a real-preserving Fourier multiplier to complex data.
    ///
    /// `multiplier(κ, is_nyquist)` must return a value consistent with a real
    /// operator, so packing two real signals as re/im parts is exact.
    fn apply<F>(&self, buf: &mut [Complex64], multiplier: F)
    where
        F: Fn(f64, bool) -> Complex64,
    {
        assert_eq!(buf.len(), self.n, "buffer length must match the grid size");
        self.forward.process(buf);
        let scale = 1.0 / self.n as f64;
        for (j, c) in buf.iter_mut().enumerate() {
            *c *= multiplier(self.wavenumbers[j], j == self.n / 2) * scale;
        }
        self.inverse.process(buf);
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: len });
        }
        Ok(())
    }

    /// Spectral derivative of a real periodic array.
    pub fn derivative(&self, data: &[f64], order: u32) -> Result<Vec<f64>> {
        check_order(order)?;
        self.check_len(data.len())?;
        let mut buf: Vec<Complex64> = data.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.apply(&mut buf, |k, nyq| derivative_multiplier(k, order, nyq));
        Ok(buf.into_iter().map(|c| c.re).collect())
    }

    /// Spectral derivative of a field of three-vectors.
    pub fn derivative_vec3(&self, data: &[Vec3], order: u32) -> Result<Vec<Vec3>> {
        check_order(order)?;
        self.check_len(data.len())?;
        Ok(self.map_vec3(data, |k, nyq| derivative_multiplier(k, order, nyq)))
    }

    /// Several derivatives of the same field, sharing nothing but the call.
    pub fn derivatives_vec3(&self, data: &[Vec3], orders: &[u32]) -> Result<Vec<Vec<Vec3>>> {
        orders.iter().map(|&p| self.derivative_vec3(data, p)).collect()
    }

    /// Periodic antiderivative of the zero-mean part of `data`, normalized
    /// to have zero mean.
    pub fn antiderivative_vec3(&self, data: &[Vec3]) -> Result<Vec<Vec3>> {
        self.check_len(data.len())?;
        Ok(self.map_vec3(data, |k, nyq| {
            if k == 0.0 || nyq {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, -1.0 / k)
            }
        }))
    }

    /// Node values of the interpolant shifted in the parameter: f(s_j + c).
    pub fn shift_vec3(&self, data: &[Vec3], c: f64) -> Result<Vec<Vec3>> {
        self.check_len(data.len())?;
        Ok(self.map_vec3(data, |k, nyq| {
            if nyq {
                Complex64::new((k * c).cos(), 0.0)
            } else {
                Complex64::from_polar(1.0, k * c)
            }
        }))
    }

    /// Node values of the interpolant shifted in the parameter, scalar case.
    pub fn shift(&self, data: &[f64], c: f64) -> Result<Vec<f64>> {
        self.check_len(data.len())?;
        let mut buf: Vec<Complex64> = data.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.apply(&mut buf, |k, nyq| {
            if nyq {
                Complex64::new((k * c).cos(), 0.0)
            } else {
                Complex64::from_polar(1.0, k * c)
            }
        });
        Ok(buf.into_iter().map(|c| c.re).collect())
    }

    fn map_vec3<F>(&self, data: &[Vec3], multiplier: F) -> Vec<Vec3>
    where
        F: Fn(f64, bool) -> Complex64 + Copy,
    {
        // x and y travel together as one complex signal
        let mut xy: Vec<Complex64> = data.iter().map(|v| Complex64::new(v.x, v.y)).collect();
        let mut z: Vec<Complex64> = data.iter().map(|v| Complex64::new(v.z, 0.0)).collect();
        self.apply(&mut xy, multiplier);
        self.apply(&mut z, multiplier);
        xy.iter().zip(z.iter()).map(|(a, b)| Vec3::new(a.re, a.im, b.re)).collect()
    }

    /// Trapezoid (= spectral) quadrature of a periodic integrand over one period.
    pub fn integrate(&self, data: &[f64]) -> f64 {
        data.iter().sum::<f64>() * self.spacing()
    }

    pub fn integrate_vec3(&self, data: &[Vec3]) -> Vec3 {
        data.iter().fold(Vec3::zeros(), |acc, v| acc + v) * self.spacing()
    }
}

fn check_order(order: u32) -> Result<()> {
    if !(1..=4).contains(&order) {
        return Err(Error::DerivativeOrder(order));
    }
    Ok(())
}

fn derivative_multiplier(k: f64, order: u32, nyquist: bool) -> Complex64 {
    if nyquist && order % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new(0.0, k).powu(order)
}

/// Spectral derivative of the trigonometric interpolant of `field` on a
/// uniform grid of the given period.
pub fn derivative(field: &[f64], order: u32, period: f64) -> Result<Vec<f64>> {
    SpectralWorkspace::new(field.len(), period)?.derivative(field, order)
}
