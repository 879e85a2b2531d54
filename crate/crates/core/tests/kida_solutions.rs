use std::f64::consts::PI;

use filamentlab::curve::SpectralWorkspace;
use filamentlab::kida::{
    base_family, derive_params, drift, family_table, g_function, g_one_parameter, helix_pitch_parameter,
    illposed_family, simple_helix, HelixParams, KidaParams,
};
use filamentlab::Vec3;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn samples() -> Vec<KidaParams> {
    vec![
        base_family(5).unwrap(),
        illposed_family(1.0, 5).unwrap(),
        illposed_family(1.0, 50).unwrap(),
        derive_params(1.0, 1.0 - 1e-3, 1.0 / 99.0, 10).unwrap(),
        derive_params(1.0, 0.8, 0.05, 5).unwrap(),
    ]
}

#[test]
fn base_family_closed_forms() {
    for m in [2u32, 5, 10, 50] {
        let p = base_family(m).unwrap();
        let c = ((m * m - 1) as f64).sqrt();
        assert!(rel(p.omega(), c) < 1e-10 && rel(p.c(), c) < 1e-10);
        assert!(rel(p.a(), 1.0) < 1e-10 && rel(p.v(), 1.0) < 1e-10);
        assert!(rel(p.period(), 2.0 * PI) < 1e-10);
        assert!(drift(&p).abs() < 1e-9);
    }
    let p = base_family(5).unwrap();
    assert!(rel(p.t_r(), 2.0 * PI / 5.0) < 1e-12 && rel(p.omega(), 24f64.sqrt()) < 1e-12);
}

#[test]
fn g_identities() {
    assert!(rel(g_function(1.0, 1.0, 1.0 / 24.0, 5).unwrap(), 1.0 / 6.0) < 1e-12);
    assert!(rel(g_function(1.0, 1.0, 1.0 / 3.0, 2).unwrap(), 4.0 / 3.0) < 1e-12);
    let eps = 1e-3;
    let general = g_function(1.0, 1.0 - eps, 1.0 / 99.0, 10).unwrap();
    assert!((general - g_one_parameter(eps, 10).unwrap()).abs() < 1e-10);
}

/// Values computed independently in 50-digit arithmetic.
#[test]
fn frozen_high_precision_values() {
    let p = derive_params(1.0, 1.0 - 1e-3, 1.0 / 99.0, 10).unwrap();
    assert!(rel(g_function(1.0, 1.0 - 1e-3, 1.0 / 99.0, 10).unwrap(), 0.040364089670482019) < 1e-10);
    assert!(rel(p.omega(), 9.9547971436756337) < 1e-10);
    assert!(rel(p.v(), 0.99999929709085521) < 1e-10);
    assert!(rel(p.a(), 0.99949499906523576) < 1e-10);
    assert!(rel(p.c(), 9.9522521065634335) < 1e-10);
    assert!(rel(p.period(), 6.2816333783923055) < 1e-10);
    assert!(rel(p.k(), 0.031464265445104546) < 1e-10);
    assert!(rel(drift(&p), 0.0025450371122002519) < 1e-7);
    assert!(rel(p.pitch().z, -0.00015442463762640898) < 1e-7);

    let q = illposed_family(1.0, 50).unwrap();
    assert!(rel(q.omega(), 50.029490646099621) < 1e-10);
    assert!(rel(q.c(), 49.962782262585155) < 1e-10);
    assert!(rel(q.period(), 6.2826702372254285) < 1e-10);
    assert!(rel(drift(&q), 0.066708383514465667) < 1e-7);
    assert!(rel(q.pitch().z, -1.0290469624319615e-5) < 1e-6);

    let q = illposed_family(1.0, 400).unwrap();
    assert!(rel(q.omega(), 399.99250018359341) < 1e-10);
    assert!(rel(q.period(), 6.283479846064807) < 1e-10);
    assert!(rel(drift(&q), 0.043748720776826506) < 1e-5);
    assert!(rel(drift(&illposed_family(2.0, 50).unwrap()), 0.19587606178052582) < 1e-7);
    assert!(rel(drift(&illposed_family(2.0, 400).unwrap()), 0.14993721285273393) < 1e-5);
}

#[test]
fn defining_identities_hold() {
    for p in samples() {
        let (a, b, d) = (p.alpha(), p.beta(), p.delta());
        assert!(rel(p.k(), ((a - b) / (a + d)).sqrt()) < 1e-12 || p.k() == 0.0);
        let g = g_function(a, b, d, p.m()).unwrap();
        assert!((g * p.omega().powi(2) - 4.0).abs() < 1e-10);
        let lhs = p.c() - 0.5 * p.a() * p.v() * p.omega();
        assert!((lhs - 0.5 * p.omega().powi(2) * (a * b * d).sqrt()).abs() < 1e-10 * p.omega().powi(2));
        assert!((p.closure_increment() - 2.0 * PI / p.m() as f64).abs() < 1e-10);
    }
}

/// Coefficients of f(R) from (A, C, V, Ω) against Ω²(R−α)(R−β)(R+δ).
#[test]
fn cubic_coefficients_match() {
    for p in samples() {
        let (om, aa, v, c) = (p.omega(), p.a(), p.v(), p.c());
        let w = c - 0.5 * aa * v * om;
        let from_motion = [om * om, v * v - 2.0 * aa * om * om, 4.0 * v * w / om + om * om * aa * aa - 4.0, 4.0 * w * w / (om * om)];
        let (al, be, de) = (p.alpha(), p.beta(), p.delta());
        let from_roots = [om * om, om * om * (de - al - be), om * om * (al * be - al * de - be * de), om * om * al * be * de];
        for (x, y) in from_motion.iter().zip(&from_roots) {
            assert!((x - y).abs() < 1e-9 * om * om, "{from_motion:?} vs {from_roots:?}");
        }
    }
}

#[test]
fn radius_ode_holds_along_profile() {
    for p in samples() {
        let n = 1024;
        let ell = p.ell();
        let ws = SpectralWorkspace::new(n, ell).unwrap();
        let r: Vec<f64> = ws.nodes().iter().map(|&s| p.radius_squared(s)).collect();
        let dr = ws.derivative(&r, 1).unwrap();
        let om = p.omega();
        for (rr, d) in r.iter().zip(&dr) {
            let f = om * om * (rr - p.alpha()) * (rr - p.beta()) * (rr + p.delta());
            assert!((d * d + f).abs() < 1e-8 * om * om);
        }
    }
}

#[test]
fn base_family_lies_on_unit_cylinder() {
    let p = base_family(5).unwrap();
    for (s, t) in [(0.0, 0.0), (1.1, 0.3), (4.0, -2.0)] {
        assert!((p.eval_solution(s, t).xy().norm() - 1.0).abs() < 1e-12);
    }
    let q = illposed_family(1.0, 10).unwrap().with_phases(0.4, 0.2);
    let x = q.eval_solution(0.0, 0.0);
    let r0 = q.radius_squared(0.0).sqrt();
    assert!((x - Vec3::new(r0 * 0.4f64.cos(), r0 * 0.4f64.sin(), 0.2)).norm() < 1e-12);
}

#[test]
fn time_evolution_is_rigid() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for p in samples() {
        let mo = p.motion();
        let s: Vec<f64> = (0..50).map(|_| rng.random_range(0.0..p.period())).collect();
        let (t1, t2) = (0.0, 0.37);
        let a: Vec<Vec3> = s.iter().map(|&x| p.eval_solution(x, t1)).collect();
        let b: Vec<Vec3> = s.iter().map(|&x| p.eval_solution(x + mo.slip * (t2 - t1), t2)).collect();
        for i in 0..50 {
            for j in 0..i {
                assert!(((a[i] - a[j]).norm() - (b[i] - b[j]).norm()).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn finite_difference_velocity_matches_rigid_motion() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for p in samples() {
        let mo = p.motion();
        for _ in 0..100 {
            let s = rng.random_range(0.0..p.period());
            let t = rng.random_range(-1.0..1.0);
            let h = 1e-7;
            let fd = (p.eval_solution(s, t + h) - p.eval_solution(s, t - h)) / (2.0 * h);
            let g = p.eval_solution(s, t);
            let rigid = -mo.slip * p.tangent(s, t) + mo.omega * Vec3::z().cross(&g) + Vec3::z() * mo.speed;
            assert!((fd - rigid).norm() < 1e-6 * mo.omega.abs().max(1.0), "{fd:?} vs {rigid:?} {mo:?} {}", p.scale());
        }
    }
}

#[test]
fn binormal_residual_at_high_resolution() {
    for p in [base_family(5).unwrap(), illposed_family(1.0, 5).unwrap(), illposed_family(1.0, 50).unwrap()] {
        let c = p.to_quasicurve(0.0, 1024).unwrap();
        let d1 = c.derivative_at_nodes(1).unwrap();
        let d2 = c.derivative_at_nodes(2).unwrap();
        let mo = p.motion();
        let worst = (0..c.n())
            .map(|j| {
                let g = c.node(j);
                let dt = -mo.slip * d1[j] + mo.omega * Vec3::z().cross(&g) + Vec3::z() * mo.speed;
                (dt - d1[j].cross(&d2[j])).norm()
            })
            .fold(0.0, f64::max);
        assert!(worst < 1e-6, "m={}: {worst:e}", p.m());
    }
}

#[test]
fn quasicurve_pitches() {
    let c = base_family(5).unwrap().to_quasicurve(0.0, 256).unwrap();
    assert!(c.pitch().norm() < 1e-10);
    let q = illposed_family(1.0, 50).unwrap();
    assert!(q.pitch().norm() < 1e-3);
    let c = q.to_quasicurve(0.0, 512).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let s = rng.random_range(-10.0..10.0);
        assert!((c.eval(s + c.period()) - c.eval(s) - c.pitch()).norm() < 1e-10);
    }
}

#[test]
fn illposed_family_limits() {
    let q = illposed_family(1.0, 100).unwrap();
    let base = (99.0f64 * 101.0).sqrt();
    assert!(rel(q.omega(), base) < 0.01);
    let b0 = base_family(30).unwrap();
    let z = illposed_family(0.0, 30).unwrap();
    assert!(rel(z.omega(), b0.omega()) < 1e-14 && rel(z.c(), b0.c()) < 1e-14);
    let ls: Vec<f64> = [50, 100, 200, 400].iter().map(|&m| illposed_family(1.0, m).unwrap().period()).collect();
    assert!(ls.iter().all(|l| (l - 2.0 * PI).abs() < 1e-3));
    assert!((ls[3] - 2.0 * PI).abs() < (ls[0] - 2.0 * PI).abs());
}

/// Drift decreases towards σ̃²/32 on unscaled parameters and sits near σ̃²/16
/// once each curve is rescaled to period 2π.
#[test]
fn drift_trends() {
    let ms = [50, 100, 200, 400];
    for s in [1.0, 2.0] {
        let rows = family_table(s, &ms, false).unwrap();
        assert!(rows.windows(2).all(|w| w[1].drift < w[0].drift));
        assert!(rows.iter().all(|r| r.drift > s * s / 32.0));
        let scaled = family_table(s, &ms, true).unwrap();
        assert!(scaled.iter().all(|r| (r.drift - s * s / 16.0).abs() < 2e-3 * s * s));
        assert!(scaled.iter().all(|r| (r.ell - 2.0 * PI).abs() < 1e-12));
    }
}

#[test]
fn drift_is_odd_under_mirror() {
    for m in [20u32, 50, 200] {
        let a = drift(&illposed_family(1.5, m).unwrap());
        let b = drift(&illposed_family(-1.5, m).unwrap());
        assert!((a.abs() - b.abs()).abs() < 1e-10);
    }
}

#[test]
fn helix_identities() {
    let h = HelixParams::new(0.1, 0.2).unwrap();
    let sol = simple_helix(&h, 128).unwrap();
    let d1 = sol.curve.derivative_at_nodes(1).unwrap();
    let d2 = sol.curve.derivative_at_nodes(2).unwrap();
    for j in 0..128 {
        let res = d1[j].cross(&d2[j]) + d1[j] * sol.slip_speed - Vec3::x() * sol.translation_speed;
        assert!(res.norm() < 1e-10);
    }
    let n = h.normalizer();
    assert!((h.base_point_speed() - 0.01 / n.powi(3)).abs() < 1e-15);
    assert!((sol.translation_speed - sol.slip_speed * 0.2 / n - h.base_point_speed()).abs() < 1e-12);
    assert!(HelixParams::new(1e-8, 0.2).unwrap().base_point_speed() < 2e-14);
    let p = helix_pitch_parameter(1.0, 10).unwrap();
    let eps = p.powf(1.5);
    assert!((1.0 / eps.hypot(p) - 10.0).abs() < 1e-12);
}

#[test]
fn nonpositive_g_is_rejected() {
    assert!(derive_params(1.0, 1.0, 1.0, 1).is_err());
    assert!(derive_params(1.0, 2.0, 0.1, 5).is_err());
}

proptest! {
    #[test]
    fn random_family_members_are_consistent(m in 3u32..60, eps in 0.0..0.02_f64) {
        let p = derive_params(1.0, 1.0 - eps, 1.0 / ((m * m - 1) as f64), m).unwrap();
        prop_assert!((p.closure_increment() - 2.0 * PI / m as f64).abs() < 1e-10);
        let g = g_function(p.alpha(), p.beta(), p.delta(), m).unwrap();
        prop_assert!((g * p.omega().powi(2) - 4.0).abs() < 1e-10);
    }
}
