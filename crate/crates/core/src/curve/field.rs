use crate::{is_grid_size, Error, Result, Vec3};

const UNIT_TOL: f64 = 1e-12;

/// Unit-vector samples of a map from the circle of length `period` to S².
#[derive(Debug, Clone, PartialEq)]
pub struct SphereField {
    samples: Vec<Vec3>,
    period: f64,
}

impl SphereField {
    /// Wraps samples that are already unit vectors.
    pub fn new(samples: Vec<Vec3>, period: f64) -> Result<Self> {
        check_grid(samples.len(), period)?;
        for (index, v) in samples.iter().enumerate() {
            let norm = v.norm();
            if !((norm - 1.0).abs() <= UNIT_TOL) {
                return Err(Error::NotUnit { index, norm });
            }
        }
        Ok(Self { samples, period })
    }

    /// Projects arbitrary nonzero samples onto the sphere.
    pub fn normalized(samples: Vec<Vec3>, period: f64) -> Result<Self> {
        check_grid(samples.len(), period)?;
        let mut out = Vec::with_capacity(samples.len());
        for (index, v) in samples.into_iter().enumerate() {
            let norm = v.norm();
            if !(norm.is_finite() && norm > 0.0) {
                return Err(Error::NotUnit { index, norm });
            }
            out.push(v / norm);
        }
        Ok(Self { samples: out, period })
    }

    /// Samples `f` at the nodes and normalizes.
    pub fn from_fn(n: usize, period: f64, f: impl Fn(f64) -> Vec3) -> Result<Self> {
        check_grid(n, period)?;
        let h = period / n as f64;
        Self::normalized((0..n).map(|j| f(j as f64 * h)).collect(), period)
    }

    pub fn samples(&self) -> &[Vec3] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Vec3> {
        self.samples
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.samples.len() as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.n()).map(|j| j as f64 * h).collect()
    }

    /// Discrete L² distance to another field on the same grid.
    pub fn l2_distance(&self, other: &SphereField) -> Result<f64> {
        if other.n() != self.n() {
            return Err(Error::LengthMismatch { expected: self.n(), got: other.n() });
        }
        let sum: f64 =
            self.samples.iter().zip(&other.samples).map(|(a, b)| (a - b).norm_squared()).sum();
        Ok((sum * self.spacing()).sqrt())
    }

    /// Applies a linear map (typically a rotation or reflection) and renormalizes.
    pub fn mapped(&self, m: &nalgebra::Matrix3<f64>) -> Result<Self> {
        Self::normalized(self.samples.iter().map(|v| m * v).collect(), self.period)
    }

    pub fn max_unit_defect(&self) -> f64 {
        self.samples.iter().map(|v| (v.norm() - 1.0).abs()).fold(0.0, f64::max)
    }
}

pub(crate) fn check_grid(n: usize, period: f64) -> Result<()> {
    if !is_grid_size(n) {
        return Err(Error::GridSize(n));
    }
    if !(period.is_finite() && period > 0.0) {
        return Err(Error::InvalidParameter(format!("period {period} must be positive")));
    }
    Ok(())
}

/// Trapezoid quadrature ∫₀^ℓ u ds, which is the pitch of the integrated curve.
pub fn pitch_of(u: &SphereField) -> Vec3 {
    u.samples.iter().fold(Vec3::zeros(), |acc, v| acc + v) * u.spacing()
}
