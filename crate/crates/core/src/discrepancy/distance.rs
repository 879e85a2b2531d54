use rayon::prelude::*;

use crate::curve::QuasiCurve;
use crate::Vec3;

use super::Reparametrization;

const SCAN: usize = 64;
const GOLDEN_ITERS: usize = 60;
const DENSE_FACTOR: usize = 8;

/// Same pitch up to rounding.
pub fn pitches_match(a: &QuasiCurve, b: &QuasiCurve) -> bool {
    let scale = a.pitch().norm().max(b.pitch().norm()).max(1.0);
    (a.pitch() - b.pitch()).norm() <= 1e-9 * scale
}

fn sup_shift(big_gamma: &QuasiCurve, gamma: &QuasiCurve, c: f64) -> f64 {
    let slope = gamma.period() / big_gamma.period();
    (0..big_gamma.n())
        .map(|j| (big_gamma.node(j) - gamma.eval(slope * big_gamma.node_parameter(j) + c)).norm())
        .fold(0.0, f64::max)
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_ITERS {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    if f1 < f2 { (x1, f1) } else { (x2, f2) }
}

/// sup of a smooth periodic function: dense scan, then golden refinement of the best sample.
fn refined_sup(f: impl Fn(f64) -> f64 + Sync, period: f64, samples: usize) -> f64 {
    let h = period / samples as f64;
    let (s_best, f_best) = (0..samples)
        .into_par_iter()
        .map(|i| (i as f64 * h, f(i as f64 * h)))
        .reduce(|| (0.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    let (_, neg) = golden_min(|s| -f(s), s_best - h, s_best + h);
    f_best.max(-neg)
}

/// The trigonometric interpolant of σ between the nodes, as an admissible p.
fn sigma_interpolant(sigma: &Reparametrization) -> Option<QuasiCurve> {
    let slope = sigma.period() / sigma.big_period();
    let h = sigma.big_period() / sigma.samples().len() as f64;
    let periodic: Vec<Vec3> =
        sigma.samples().iter().enumerate().map(|(j, x)| Vec3::new(x - slope * j as f64 * h, 0.0, 0.0)).collect();
    QuasiCurve::new(Vec3::new(sigma.period(), 0.0, 0.0), sigma.big_period(), periodic).ok()
}

/// Upper bound for d_P: best constant-shift affine map, tightened by σ when given.
///
/// The shift is searched on the nodes of Γ; the sup for the chosen maps is
/// then taken over a dense sampling with local refinement. Infinite when the
/// pitches differ.
pub fn d_parametric_upper(
    big_gamma: &QuasiCurve,
    gamma: &QuasiCurve,
    sigma: Option<&Reparametrization>,
) -> f64 {
    if !pitches_match(big_gamma, gamma) {
        return f64::INFINITY;
    }
    let ell = gamma.period();
    let h = ell / SCAN as f64;
    let (c_best, f_best) = (0..SCAN)
        .into_par_iter()
        .map(|i| {
            let c = -0.5 * ell + i as f64 * h;
            (c, sup_shift(big_gamma, gamma, c))
        })
        .reduce(|| (0.0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    let (c_ref, f_ref) = golden_min(|c| sup_shift(big_gamma, gamma, c), c_best - h, c_best + h);
    let c = if f_ref < f_best { c_ref } else { c_best };
    let slope = ell / big_gamma.period();
    let dense = DENSE_FACTOR * big_gamma.n();
    let via_shift =
        refined_sup(|s| (big_gamma.eval(s) - gamma.eval(slope * s + c)).norm(), big_gamma.period(), dense);
    let via_sigma = sigma.and_then(sigma_interpolant).map_or(f64::INFINITY, |p| {
        refined_sup(|s| (big_gamma.eval(s) - gamma.eval(p.eval(s).x)).norm(), big_gamma.period(), dense)
    });
    via_shift.min(via_sigma)
}

/// Distance from x to the curve, given dense samples of it with spacing h.
fn distance_to(to: &QuasiCurve, samples: &[(f64, Vec3)], h: f64, x: Vec3) -> f64 {
    let (xi, _) = samples
        .iter()
        .map(|(xi, p)| (*xi, (x - p).norm_squared()))
        .fold((0.0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    let (t, d2) = golden_min(|t| (x - to.eval(t)).norm_squared(), xi - h, xi + h);
    polish(to, x, t).min(d2.sqrt())
}

/// sup over `from` of the distance to the point set of `to`.
fn one_sided(from: &QuasiCurve, to: &QuasiCurve) -> f64 {
    let dense_n = DENSE_FACTOR * to.n();
    let h = to.period() / dense_n as f64;
    let samples: Vec<(f64, Vec3)> =
        (-(dense_n as i64)..2 * dense_n as i64).map(|i| (i as f64 * h, to.eval(i as f64 * h))).collect();
    refined_sup(|s| distance_to(to, &samples, h, from.eval(s)), from.period(), DENSE_FACTOR * from.n())
}

/// A few Newton steps on (x − γ(t))·γ′(t) = 0; returns the distance reached.
fn polish(to: &QuasiCurve, x: Vec3, mut t: f64) -> f64 {
    let mut best = (x - to.eval(t)).norm();
    for _ in 0..4 {
        let j = to.jet(t);
        let diff = x - j.pos;
        let dh = -j.d1.norm_squared() + diff.dot(&j.d2);
        if !(dh < 0.0) {
            break;
        }
        t -= diff.dot(&j.d1) / dh;
        best = best.min((x - to.eval(t)).norm());
    }
    best
}

/// Two-sided Hausdorff distance, sampled densely against three periods and refined.
pub fn d_hausdorff(big_gamma: &QuasiCurve, gamma: &QuasiCurve) -> f64 {
    one_sided(big_gamma, gamma).max(one_sided(gamma, big_gamma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn circle(n: usize) -> QuasiCurve {
        QuasiCurve::from_fn(n, 2.0 * PI, Vec3::zeros(), |s| Vec3::new(s.cos(), s.sin(), 0.0)).unwrap()
    }

    #[test]
    fn identical_and_translated() {
        let c = circle(32);
        assert!(d_parametric_upper(&c, &c, None) < 1e-12);
        assert!(d_hausdorff(&c, &c) < 1e-12);
        let d = 0.03;
        let g = c.translated(Vec3::z() * d);
        assert!((d_parametric_upper(&g, &c, None) - d).abs() < 1e-10);
        assert!((d_hausdorff(&g, &c) - d).abs() < 1e-12);
    }

    #[test]
    fn reversed_shift_detected() {
        let c = circle(32);
        let g = c.shifted(1.0);
        assert!(d_parametric_upper(&g, &c, None) < 1e-9);
    }

    #[test]
    fn pitch_mismatch_is_infinite() {
        let c = circle(32);
        let helix =
            QuasiCurve::from_fn(32, 2.0 * PI, Vec3::z(), |s| Vec3::new(s.cos(), s.sin(), s / (2.0 * PI))).unwrap();
        assert!(d_parametric_upper(&helix, &c, None).is_infinite());
    }
}
