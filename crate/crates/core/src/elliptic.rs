//! Complete and incomplete elliptic integrals and Jacobi elliptic functions
//! for real arguments and modulus 0 ≤ k < 1.
//!
//! Complete K and E use the arithmetic-geometric mean. Incomplete integrals and
//! complete Π use Carlson's symmetric forms R_F, R_D, R_J. The Jacobi functions
//! come from the descending Landen (AGM) scheme after reducing the argument to
//! [−K, K].

use std::f64::consts::{FRAC_PI_2, PI};

use crate::{Error, Result};

/// Largest admissible modulus.
pub const K_MAX: f64 = 1.0 - 1e-10;

const AGM_MAX_ITER: usize = 40;
const CARLSON_TOL: f64 = 1e-3;

/// Elliptic modulus k ∈ [0, 1 − 10⁻¹⁰].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticModulus {
    k: f64,
    k2: f64,
    kc: f64,
}

impl EllipticModulus {
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..=K_MAX).contains(&k) {
            return Err(Error::Modulus(k));
        }
        let k2 = k * k;
        // (1−k)(1+k) keeps precision for k near 1
        let kc = ((1.0 - k) * (1.0 + k)).sqrt();
        Ok(Self { k, k2, kc })
    }

    /// From the parameter m = k².
    pub fn from_parameter(m: f64) -> Result<Self> {
        if !(m >= 0.0) {
            return Err(Error::Modulus(m));
        }
        Self::new(m.sqrt())
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn parameter(&self) -> f64 {
        self.k2
    }

    /// Complementary modulus k′ = √(1−k²).
    pub fn complementary(&self) -> f64 {
        self.kc
    }

    /// K(k) = π / (2·AGM(1, k′)).
    pub fn complete_k(&self) -> f64 {
        let (a, _) = agm_with_sum(self.kc, self.k2);
        FRAC_PI_2 / a
    }

    /// E(k) = K(k)·(1 − Σ 2ⁿ⁻¹ cₙ²).
    pub fn complete_e(&self) -> f64 {
        let (a, sum) = agm_with_sum(self.kc, self.k2);
        FRAC_PI_2 / a * (1.0 - sum)
    }

    /// Π(n, k) = ∫₀^{π/2} dθ / ((1 − n sin²θ)√(1 − k² sin²θ)), for n < 1.
    pub fn complete_pi(&self, n: f64) -> Result<f64> {
        if !(n < 1.0) {
            return Err(Error::Characteristic(n));
        }
        let y = self.kc * self.kc;
        Ok(carlson_rf(0.0, y, 1.0) + n / 3.0 * carlson_rj(0.0, y, 1.0, 1.0 - n))
    }

    /// Legendre form F(φ|k).
    pub fn legendre_f(&self, phi: f64) -> f64 {
        let (j, r) = reduce_angle(phi);
        let (s, c) = r.sin_cos();
        let f = s * carlson_rf(c * c, 1.0 - self.k2 * s * s, 1.0);
        2.0 * j * self.complete_k() + f
    }

    /// Legendre form E(φ|k).
    pub fn legendre_e(&self, phi: f64) -> f64 {
        let (j, r) = reduce_angle(phi);
        2.0 * j * self.complete_e() + self.legendre_e_reduced(r)
    }

    fn legendre_e_reduced(&self, phi: f64) -> f64 {
        let (s, c) = phi.sin_cos();
        let (c2, d2) = (c * c, 1.0 - self.k2 * s * s);
        s * carlson_rf(c2, d2, 1.0) - self.k2 / 3.0 * s * s * s * carlson_rd(c2, d2, 1.0)
    }

    fn legendre_pi_reduced(&self, phi: f64, n: f64) -> f64 {
        let (s, c) = phi.sin_cos();
        let (c2, d2) = (c * c, 1.0 - self.k2 * s * s);
        s * carlson_rf(c2, d2, 1.0)
            + n / 3.0 * s * s * s * carlson_rj(c2, d2, 1.0, 1.0 - n * s * s)
    }

    /// Splits u = 2jK + r with r ∈ [−K, K] and returns (j, am(r)).
    fn reduced_amplitude(&self, u: f64) -> (f64, f64) {
        let kk = self.complete_k();
        let j = (u / (2.0 * kk)).round();
        (j, self.landen_amplitude(u - 2.0 * j * kk))
    }

    /// Descending Landen scheme for am(u), accurate for |u| ≲ K.
    fn landen_amplitude(&self, u: f64) -> f64 {
        let mut a = [0.0; AGM_MAX_ITER + 1];
        let mut c = [0.0; AGM_MAX_ITER + 1];
        a[0] = 1.0;
        let mut b = self.kc;
        c[0] = self.k;
        let mut levels = 0;
        while levels < AGM_MAX_ITER && c[levels].abs() > f64::EPSILON * a[levels] {
            let an = 0.5 * (a[levels] + b);
            c[levels + 1] = 0.5 * (a[levels] - b);
            b = (a[levels] * b).sqrt();
            levels += 1;
            a[levels] = an;
        }
        let mut phi = (1u64 << levels) as f64 * a[levels] * u;
        for n in (1..=levels).rev() {
            phi = 0.5 * (phi + (c[n] / a[n] * phi.sin()).asin());
        }
        phi
    }

    /// Jacobi amplitude am(u|k).
    pub fn am(&self, u: f64) -> f64 {
        let (j, r) = self.reduced_amplitude(u);
        j * PI + r
    }

    /// (sn, cn, dn)(u|k).
    pub fn sn_cn_dn(&self, u: f64) -> (f64, f64, f64) {
        let (j, r) = self.reduced_amplitude(u);
        let sign = if (j as i64) % 2 == 0 { 1.0 } else { -1.0 };
        let (s, c) = r.sin_cos();
        let (sn, cn) = (sign * s, sign * c);
        (sn, cn, (1.0 - self.k2 * sn * sn).sqrt())
    }

    /// E(u|k) = ∫₀^u dn²(v) dv.
    pub fn incomplete_e(&self, u: f64) -> f64 {
        let (j, r) = self.reduced_amplitude(u);
        let whole = if j == 0.0 { 0.0 } else { 2.0 * j * self.complete_e() };
        whole + self.legendre_e_reduced(r)
    }

    /// Π(u|n,k) = ∫₀^u dv / (1 − n sn²(v)).
    ///
    /// For n ≥ 1 the integrand has poles; only |u| < K with n·sn²(u) < 1 is accepted.
    pub fn incomplete_pi(&self, u: f64, n: f64) -> Result<f64> {
        if !n.is_finite() {
            return Err(Error::Characteristic(n));
        }
        let (j, r) = self.reduced_amplitude(u);
        if n >= 1.0 {
            let s = r.sin();
            if j != 0.0 || r.abs() >= FRAC_PI_2 || n * s * s >= 1.0 {
                return Err(Error::Characteristic(n));
            }
            return Ok(self.legendre_pi_reduced(r, n));
        }
        let whole = if j == 0.0 { 0.0 } else { 2.0 * j * self.complete_pi(n)? };
        Ok(whole + self.legendre_pi_reduced(r, n))
    }
}

/// Splits φ = jπ + r with r ∈ [−π/2, π/2].
fn reduce_angle(phi: f64) -> (f64, f64) {
    let j = (phi / PI).round();
    (j, phi - j * PI)
}

/// AGM(1, b) with the E-sum Σ 2ⁿ⁻¹ cₙ², c₀² = k².
fn agm_with_sum(b0: f64, k2: f64) -> (f64, f64) {
    let (mut a, mut b) = (1.0_f64, b0);
    let mut sum = 0.5 * k2;
    let mut pow = 0.5;
    for _ in 0..AGM_MAX_ITER {
        let c = 0.5 * (a - b);
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        pow *= 2.0;
        sum += pow * c * c;
    }
    (a, sum)
}

/// Carlson R_F(x, y, z); at most one argument may vanish.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> f64 {
    let (mut x, mut y, mut z) = (x, y, z);
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        let ave = (x + y + z) / 3.0;
        let (dx, dy, dz) = ((ave - x) / ave, (ave - y) / ave, (ave - z) / ave);
        if dx.abs().max(dy.abs()).max(dz.abs()) < CARLSON_TOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 + (e2 / 24.0 - 0.1 - 3.0 / 44.0 * e3) * e2 + e3 / 14.0) / ave.sqrt();
        }
    }
}

/// Carlson R_D(x, y, z) = R_J(x, y, z, z).
pub fn carlson_rd(x: f64, y: f64, z: f64) -> f64 {
    const C1: f64 = 3.0 / 14.0;
    const C2: f64 = 1.0 / 6.0;
    const C3: f64 = 9.0 / 22.0;
    const C4: f64 = 3.0 / 26.0;
    const C5: f64 = 0.25 * C3;
    const C6: f64 = 1.5 * C4;
    let (mut x, mut y, mut z) = (x, y, z);
    let (mut sum, mut fac) = (0.0, 1.0);
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (z + lam));
        fac *= 0.25;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        let ave = 0.2 * (x + y + 3.0 * z);
        let (dx, dy, dz) = ((ave - x) / ave, (ave - y) / ave, (ave - z) / ave);
        if dx.abs().max(dy.abs()).max(dz.abs()) < CARLSON_TOL {
            let ea = dx * dy;
            let eb = dz * dz;
            let ec = ea - eb;
            let ed = ea - 6.0 * eb;
            let ee = ed + ec + ec;
            return 3.0 * sum
                + fac
                    * (1.0
                        + ed * (-C1 + C5 * ed - C6 * dz * ee)
                        + dz * (C2 * ee + dz * (-C3 * ec + dz * C4 * ea)))
                    / (ave * ave.sqrt());
        }
    }
}

/// Carlson R_C(x, y) for y > 0.
pub fn carlson_rc(x: f64, y: f64) -> f64 {
    let (mut x, mut y) = (x, y);
    loop {
        let lam = 2.0 * x.sqrt() * y.sqrt() + y;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        let ave = (x + y + y) / 3.0;
        let s = (y - ave) / ave;
        if s.abs() < CARLSON_TOL {
            return (1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)))) / ave.sqrt();
        }
    }
}

/// Carlson R_J(x, y, z, p) for p > 0.
pub fn carlson_rj(x: f64, y: f64, z: f64, p: f64) -> f64 {
    const C1: f64 = 3.0 / 14.0;
    const C2: f64 = 1.0 / 3.0;
    const C3: f64 = 3.0 / 22.0;
    const C4: f64 = 3.0 / 26.0;
    const C5: f64 = 0.75 * C3;
    const C6: f64 = 1.5 * C4;
    const C7: f64 = 0.5 * C2;
    const C8: f64 = C3 + C3;
    let (mut x, mut y, mut z, mut p) = (x, y, z, p);
    let (mut sum, mut fac) = (0.0, 1.0);
    loop {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * (sy + sz) + sy * sz;
        let alpha = (p * (sx + sy + sz) + sx * sy * sz).powi(2);
        let beta = p * (p + lam).powi(2);
        sum += fac * carlson_rc(alpha, beta);
        fac *= 0.25;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        p = 0.25 * (p + lam);
        let ave = 0.2 * (x + y + z + p + p);
        let (dx, dy, dz, dp) = ((ave - x) / ave, (ave - y) / ave, (ave - z) / ave, (ave - p) / ave);
        if dx.abs().max(dy.abs()).max(dz.abs()).max(dp.abs()) < CARLSON_TOL {
            let ea = dx * (dy + dz) + dy * dz;
            let eb = dx * dy * dz;
            let ec = dp * dp;
            let ed = ea - 3.0 * ec;
            let ee = eb + 2.0 * dp * (ea - ec);
            return 3.0 * sum
                + fac
                    * (1.0
                        + ed * (-C1 + C5 * ed - C6 * ee)
                        + eb * (C7 + dp * (-C8 + dp * C4))
                        + dp * ea * (C2 - dp * C3)
                        - C2 * dp * ec)
                    / (ave * ave.sqrt());
        }
    }
}

pub fn complete_k(k: f64) -> Result<f64> {
    Ok(EllipticModulus::new(k)?.complete_k())
}

pub fn complete_e(k: f64) -> Result<f64> {
    Ok(EllipticModulus::new(k)?.complete_e())
}

pub fn complete_pi(n: f64, k: f64) -> Result<f64> {
    EllipticModulus::new(k)?.complete_pi(n)
}

pub fn jacobi_sn_cn_dn(u: f64, k: f64) -> Result<(f64, f64, f64)> {
    Ok(EllipticModulus::new(k)?.sn_cn_dn(u))
}

pub fn incomplete_e(u: f64, k: f64) -> Result<f64> {
    Ok(EllipticModulus::new(k)?.incomplete_e(u))
}

pub fn incomplete_pi(u: f64, n: f64, k: f64) -> Result<f64> {
    EllipticModulus::new(k)?.incomplete_pi(u, n)
}
