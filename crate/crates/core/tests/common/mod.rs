//! Slow reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use filamentlab::curve::QuasiCurve;
use filamentlab::Vec3;

const GK_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const G_WEIGHTS: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = GK_WEIGHTS[7] * fc;
    let mut g = G_WEIGHTS[3] * fc;
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let s = f(c - x) + f(c + x);
        k += GK_WEIGHTS[i] * s;
        if i % 2 == 1 {
            g += G_WEIGHTS[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod (7, 15) quadrature to absolute tolerance `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol.max(1e-15 * v.abs()) || depth > 30 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, 0.5 * tol, depth + 1) + rec(f, m, b, 0.5 * tol, depth + 1)
    }
    rec(&f, a, b, tol, 0)
}

const TOL: f64 = 1e-14;

pub fn legendre_f(phi: f64, k: f64) -> f64 {
    integrate(|t| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt(), 0.0, phi, TOL)
}

pub fn legendre_e(phi: f64, k: f64) -> f64 {
    integrate(|t| (1.0 - k * k * t.sin().powi(2)).sqrt(), 0.0, phi, TOL)
}

pub fn legendre_pi(n: f64, phi: f64, k: f64) -> f64 {
    integrate(|t| {
        let s2 = t.sin().powi(2);
        1.0 / ((1.0 - n * s2) * (1.0 - k * k * s2).sqrt())
    }, 0.0, phi, TOL)
}

pub fn complete_k(k: f64) -> f64 {
    legendre_f(FRAC_PI_2, k)
}

pub fn complete_e(k: f64) -> f64 {
    legendre_e(FRAC_PI_2, k)
}

pub fn complete_pi(n: f64, k: f64) -> f64 {
    legendre_pi(n, FRAC_PI_2, k)
}

/// am(u|k) by bisection on F(φ|k) = u.
pub fn amplitude(u: f64, k: f64) -> f64 {
    let guess = u / complete_k(k) * FRAC_PI_2;
    let (mut lo, mut hi) = (guess - 2.0, guess + 2.0);
    while hi - lo > 1e-15 * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if legendre_f(mid, k) > u {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Nearest point parameter of x on γ, by dense sampling of [lo, hi] and golden refinement.
pub fn nearest_parameter(gamma: &QuasiCurve, x: Vec3, lo: f64, hi: f64, samples: usize) -> f64 {
    let h = (hi - lo) / samples as f64;
    let d = |s: f64| (gamma.eval(s) - x).norm_squared();
    let best = (0..=samples).map(|i| lo + i as f64 * h).fold((lo, f64::INFINITY), |a, s| {
        let v = d(s);
        if v < a.1 { (s, v) } else { a }
    });
    let (mut a, mut b) = (best.0 - h, best.0 + h);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    while b - a > 1e-13 {
        let c = b - g * (b - a);
        let e = a + g * (b - a);
        if d(c) < d(e) {
            b = e;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}

/// F of Γ against γ with feet from brute-force nearest points, evaluated on `m` nodes of Γ.
pub fn f_oracle(big_gamma: &QuasiCurve, gamma: &QuasiCurve, r: f64, m: usize) -> f64 {
    let big_l = big_gamma.period();
    let ell = gamma.period();
    let h = big_l / m as f64;
    let mut sum = 0.0;
    let mut prev: Option<f64> = None;
    for j in 0..m {
        let s = j as f64 * h;
        let jet = big_gamma.jet(s);
        let xi = match prev {
            None => nearest_parameter(gamma, jet.pos, -ell, 2.0 * ell, 30000),
            Some(p) => nearest_parameter(gamma, jet.pos, p - 0.05 * ell, p + 0.05 * ell, 400),
        };
        prev = Some(xi);
        let g = gamma.jet(xi);
        let d2 = (jet.pos - g.pos).norm_squared();
        let f = (1.0 - d2 / (r * r)).max(0.0);
        sum += 1.0 - f * g.d1.dot(&jet.d1);
    }
    sum * h
}

/// Two-sided Hausdorff distance by dense sampling of one period of each curve.
pub fn hausdorff_oracle(a: &QuasiCurve, b: &QuasiCurve, samples: usize) -> f64 {
    let one_sided = |p: &QuasiCurve, q: &QuasiCurve| -> f64 {
        (0..samples)
            .map(|i| {
                let x = p.eval(p.period() * i as f64 / samples as f64);
                let xi = nearest_parameter(q, x, -q.period(), 2.0 * q.period(), 3 * 512);
                (q.eval(xi) - x).norm()
            })
            .fold(0.0, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}
