//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use filamentlab::curve::{integrate_tangent, pitch_of, QuasiCurve, SphereField};
use filamentlab::discrepancy::{f_infimum, inequality_suite, CurvatureData, DiscrepancyConfig};
use filamentlab::elliptic;
use filamentlab::estimates::{
    gronwall_experiment, illposed_experiment, pointwise_estimate_check, weak_formulation_residual,
    weak_strong_experiment, GronwallConfig, RigidFlow, TubularField,
};
use filamentlab::initial::{circle, SymmetricPerturbation};
use filamentlab::kida::{derive_params, illposed_family, simple_helix, HelixParams};
use filamentlab::smap::{self, invariants, EvolveConfig};
use filamentlab::{rng, Vec3};
use nalgebra::Rotation3;
use rand::Rng;

type Outcome = filamentlab::Result<(bool, String)>;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn max_dev(a: &[Vec3], b: &[Vec3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn symmetric_perturbation(seed: u64, n: usize, size: f64) -> filamentlab::Result<SphereField> {
    Ok(SymmetricPerturbation::random(&mut rng::seeded(seed), 4).field_with_size(n, size)?.0)
}

fn kida_base_family() -> Outcome {
    let mut worst = 0.0f64;
    for m in [2u32, 5, 10, 50] {
        let mf = m as f64;
        let p = derive_params(1.0, 1.0, 1.0 / (mf * mf - 1.0), m)?;
        let root = (mf * mf - 1.0).sqrt();
        for e in [rel(p.omega(), root), rel(p.a(), 1.0), rel(p.v(), 1.0), rel(p.c(), root), rel(p.ell(), 2.0 * PI)] {
            worst = worst.max(e);
        }
    }
    Ok((worst < 1e-10, format!("max relative error {worst:.2e} (tol 1e-10)")))
}

fn elliptic_kernel() -> Outcome {
    let k0 = (elliptic::complete_k(0.0)? - FRAC_PI_2).abs();
    let p0 = (elliptic::complete_pi(0.0, 0.0)? - FRAC_PI_2).abs();
    let mut r = rng::seeded(17);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let k: f64 = r.random_range(0.0..0.95);
        let kk = common::complete_k(k);
        let u: f64 = r.random_range(-3.0 * kk..3.0 * kk);
        let n: f64 = r.random_range(-2.0..0.9);
        let phi = common::amplitude(u, k);
        let (sn, cn, dn) = elliptic::jacobi_sn_cn_dn(u, k)?;
        let e = elliptic::incomplete_e(u, k)?;
        let p = elliptic::incomplete_pi(u, n, k)?;
        for err in [
            (sn - phi.sin()).abs(),
            (cn - phi.cos()).abs(),
            (dn - (1.0 - k * k * phi.sin().powi(2)).sqrt()).abs(),
            (e - common::legendre_e(phi, k)).abs() / e.abs().max(1.0),
            (p - common::legendre_pi(n, phi, k)).abs() / p.abs().max(1.0),
        ] {
            worst = worst.max(err);
        }
    }
    let mut legendre = 0.0f64;
    for _ in 0..20 {
        let k: f64 = r.random_range(0.01..0.99);
        let kp = (1.0 - k * k).sqrt();
        let (kk, ee) = (elliptic::complete_k(k)?, elliptic::complete_e(k)?);
        let (kkp, eep) = (elliptic::complete_k(kp)?, elliptic::complete_e(kp)?);
        legendre = legendre.max((ee * kkp + eep * kk - kk * kkp - FRAC_PI_2).abs());
    }
    let pass = k0 < 1e-14 && p0 < 1e-14 && worst < 1e-10 && legendre < 1e-10;
    Ok((
        pass,
        format!("|K(0)-pi/2| {k0:.1e}, |Pi(0,0)-pi/2| {p0:.1e}, oracle {worst:.2e}, Legendre {legendre:.2e}"),
    ))
}

fn exact_solution_residual() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (label, p) in [
        ("m=5 (1,0.8,0.05)", derive_params(1.0, 0.8, 0.05, 5)?),
        ("m=5 sigma=1", illposed_family(1.0, 5)?),
        ("m=50 sigma=1", illposed_family(1.0, 50)?),
    ] {
        let c = p.to_quasicurve(0.0, 1024)?;
        let d1 = c.derivative_at_nodes(1)?;
        let d2 = c.derivative_at_nodes(2)?;
        let mo = p.motion();
        let worst = (0..c.n())
            .map(|j| {
                let rigid = -mo.slip * d1[j] + mo.omega * Vec3::z().cross(&c.node(j)) + Vec3::z() * mo.speed;
                (rigid - d1[j].cross(&d2[j])).norm()
            })
            .fold(0.0, f64::max);
        pass &= worst < 1e-6;
        parts.push(format!("{label}: {worst:.2e}"));
    }
    Ok((pass, format!("sup residual {} (tol 1e-6)", parts.join(", "))))
}

fn conservation() -> Outcome {
    let u = symmetric_perturbation(2026, 256, 1e-2)?;
    let traj = smap::evolve(&u, &EvolveConfig::new(1.0, 1e-4).with_save_every(100))?;
    let rep = invariants(&traj)?;
    let de = rep.max_relative_energy_drift();
    let di = rep.second.iter().map(|i| (i - rep.second[0]).abs()).fold(0.0, f64::max);
    let a0 = pitch_of(&traj.states[0]);
    let da = traj.states.iter().map(|s| (pitch_of(s) - a0).norm()).fold(0.0, f64::max);
    let bound = rep.h2_bound_holds();
    Ok((
        de < 1e-6 && di < 1e-5 && da < 1e-8 && bound,
        format!("|dE|/E {de:.2e}, |dI| {di:.2e}, pitch drift {da:.2e}, H2 bound at all {} saves: {bound}", traj.len()),
    ))
}

fn stationarity() -> Outcome {
    let u = circle(256)?;
    let traj = smap::evolve(&u, &EvolveConfig::new(1.0, 1e-4).with_save_every(1000))?;
    let worst = traj.states.iter().map(|s| max_dev(s.samples(), u.samples())).fold(0.0, f64::max);
    Ok((worst < 1e-8, format!("sup deviation {worst:.2e} (tol 1e-8)")))
}

fn helix_mechanics() -> Outcome {
    let h = HelixParams::new(0.1, 0.2)?;
    let sol = simple_helix(&h, 128)?;
    let d1 = sol.curve.derivative_at_nodes(1)?;
    let d2 = sol.curve.derivative_at_nodes(2)?;
    let identity = (0..128)
        .map(|j| (d1[j].cross(&d2[j]) + d1[j] * sol.slip_speed - Vec3::x() * sol.translation_speed).norm())
        .fold(0.0, f64::max);
    let formula = 0.01 / (0.01f64 + 0.04).powf(1.5);
    let analytic = rel(h.base_point_speed(), formula);

    let u = SphereField::from_fn(64, h.period(), |s| h.tangent(s))?;
    let traj = smap::evolve(&u, &EvolveConfig::new(0.1, 1e-4).with_save_every(100))?;
    let t = *traj.times.last().expect("saved frames");
    let numeric = rel(traj.c_w.last().expect("saved frames").x / t, formula);
    Ok((
        identity < 1e-10 && analytic < 1e-10 && numeric < 1e-3,
        format!("binormal identity {identity:.2e}, closed-form speed {analytic:.2e} (tol 1e-10), evolved speed {numeric:.2e} (tol 1e-3)"),
    ))
}

fn illposed_drift() -> Outcome {
    let ms = [50, 100, 200, 400];
    let mut pass = true;
    let mut parts = Vec::new();
    for sigma in [1.0, 2.0] {
        let rep = illposed_experiment(sigma, &ms, None)?;
        let errors: Vec<f64> = rep.drift_values.iter().map(|d| (d - rep.limit).abs()).collect();
        let decreasing = errors.windows(2).all(|w| w[1] < w[0]);
        let close = errors[3] < 0.1 * rep.limit;
        pass &= decreasing && close;
        let values: Vec<String> = rep.drift_values.iter().map(|d| format!("{d:.5}")).collect();
        parts.push(format!(
            "sigma {sigma}: drift [{}] vs limit {:.4}, decreasing error {decreasing}, |err(400)| {:.4} < {:.4}: {close}",
            values.join(", "),
            rep.limit,
            errors[3],
            0.1 * rep.limit
        ));
    }
    Ok((pass, parts.join("; ")))
}

fn gronwall_bound() -> Outcome {
    let u = circle(256)?;
    let v = symmetric_perturbation(2026, 256, 1e-3)?;
    let probe = gronwall_experiment(&u, &v, &GronwallConfig::new(1e-3, 1e-4))?;
    let t_end = probe.t_r.min(0.5);
    let steps = (t_end / 1e-4).floor().max(1.0);
    let cfg = GronwallConfig::new(steps * 1e-4, 1e-4).with_save_every(5);
    let rep = gronwall_experiment(&u, &v, &cfg)?;
    let r = rep.constants.r;
    let tube_ok = (r - rep.constants.r_gamma / 8.0).abs() < 1e-12;
    let bound_ok = rep.rows.iter().all(|row| row.f <= row.bound * (1.0 + 1e-3) + filamentlab::estimates::GRONWALL_ABS_TOL);
    let dist_ok = rep.rows.iter().all(|row| row.d_parametric_upper < r);
    let worst = rep.rows.iter().map(|row| row.f / row.bound).fold(0.0, f64::max);
    let dmax = rep.rows.iter().map(|row| row.d_parametric_upper).fold(0.0, f64::max);
    Ok((
        tube_ok && bound_ok && dist_ok && rep.exit_time.is_none(),
        format!(
            "K {:.1}, F(0) {:.2e}, T_r {:.4}, {} saves to t={:.4}: max F/bound {worst:.4}, max d_P {dmax:.2e} < r {r:.4}",
            rep.constants.k,
            rep.f0,
            rep.t_r,
            rep.rows.len(),
            rep.rows.last().map_or(0.0, |row| row.t)
        ),
    ))
}

fn near_circle(seed: u64, n: usize, size: f64) -> filamentlab::Result<QuasiCurve> {
    integrate_tangent(&symmetric_perturbation(seed, n, size)?, Vec3::zeros())
}

fn inequalities() -> Outcome {
    let g = integrate_tangent(&circle(128)?, Vec3::zeros())?;
    let cd = CurvatureData::of(&g)?;
    let mut r = rng::seeded(2027);
    let (mut instances, mut checks, mut violations, mut seed) = (0, 0, 0, 0u64);
    let mut worst = f64::INFINITY;
    while instances < 100 && seed < 1000 {
        seed += 1;
        let size = r.random_range(1e-4..1e-2);
        let mut big = near_circle(seed, 128, size)?;
        match seed % 3 {
            1 => big = big.scaled(1.0 + r.random_range(-2e-3..2e-3))?,
            2 => big = big.translated(Vec3::new(0.0, 0.0, r.random_range(-5e-3..5e-3))),
            _ => {}
        }
        let radius = if seed % 2 == 0 { 0.1 } else { 0.125 };
        let Some(sigma) = f_infimum(&big, &g, &cd, &DiscrepancyConfig::new(radius)?)?.sigma else { continue };
        let rep = inequality_suite(&big, &g, &sigma, radius, &cd, 1e-12)?;
        let applied: Vec<_> = rep.entries.iter().filter(|e| e.applicable).collect();
        if applied.is_empty() {
            continue;
        }
        instances += 1;
        checks += applied.len();
        violations += applied.iter().filter(|e| !e.holds).count();
        worst = applied.iter().map(|e| e.slack).fold(worst, f64::min);
    }
    Ok((
        instances == 100 && violations == 0,
        format!("{instances} instances, {checks} applicable checks, {violations} violations, min rhs-lhs {worst:.2e}"),
    ))
}

fn pointwise() -> Outcome {
    let flow = RigidFlow::kida(&illposed_family(1.0, 5)?, 256)?;
    let rep = pointwise_estimate_check(&flow, 0.0, 1000, flow.curvature().tube(), 42)?;
    Ok((
        rep.violations == 0 && rep.evaluated == 1000,
        format!(
            "{} admissible of {} drawn, {} violations, max lhs/(rhs+slack) {:.3}",
            rep.evaluated, rep.requested, rep.violations, rep.max_ratio
        ),
    ))
}

fn frames(flow: &RigidFlow, dt: f64, t_end: f64) -> (Vec<QuasiCurve>, Vec<f64>) {
    let k = (t_end / dt).round() as usize;
    let times: Vec<f64> = (0..=k).map(|i| i as f64 * dt).collect();
    (times.iter().map(|&t| flow.curve_at(t)).collect(), times)
}

fn weak_formulation() -> Outcome {
    let gamma = RigidFlow::unit_circle(128)?;
    let field = TubularField::new(&gamma, 0.125)?;
    let (c, t) = frames(&gamma, 1e-3, 0.02);
    let same = weak_formulation_residual(&field, &c, &t)?.max_residual();

    let tilt = Rotation3::from_axis_angle(&Vec3::x_axis(), 0.05);
    let big = RigidFlow::circle(128, 1.0, tilt, Vec3::new(0.01, 0.0, 0.0))?;
    let mut res = Vec::new();
    for dt in [2e-2, 1e-2, 5e-3] {
        let (c, t) = frames(&big, dt, 0.2);
        res.push(weak_formulation_residual(&field, &c, &t)?.max_residual());
    }
    let ratios: Vec<f64> = res.windows(2).map(|w| w[0] / w[1]).collect();
    let second_order = ratios.iter().all(|q| (3.5..4.5).contains(q));
    Ok((
        same < 1e-6 && second_order,
        format!(
            "translating circle {same:.2e} (tol 1e-6); tilted pair residuals {:.2e}, {:.2e}, {:.2e}, halving ratios {:.2}, {:.2}",
            res[0], res[1], res[2], ratios[0], ratios[1]
        ),
    ))
}

fn weak_strong() -> Outcome {
    let u = circle(256)?;
    let mut ratios = Vec::new();
    for size in [1e-2, 1e-3, 1e-4] {
        let v = symmetric_perturbation(2026, 256, size)?;
        let rep = weak_strong_experiment(&u, &v, &GronwallConfig::new(0.25, 1e-4).with_save_every(250))?;
        match (rep.exit_time, rep.ratio_at(0.25)) {
            (None, Some(q)) => ratios.push(q),
            (exit, _) => return Ok((false, format!("size {size}: continuation stopped at {exit:?}"))),
        }
    }
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &q| (a.min(q), b.max(q)));
    Ok((
        lo > 0.0 && hi / lo < 2.0,
        format!("ratio at t=0.25: {:.4}, {:.4}, {:.4}; spread x{:.3} (tol x2)", ratios[0], ratios[1], ratios[2], hi / lo),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, u64); 12] = [
        ("Kida base family identities", kida_base_family, 1),
        ("elliptic kernel", elliptic_kernel, 10),
        ("exact-solution PDE residual", exact_solution_residual, 5),
        ("conservation", conservation, 120),
        ("stationarity", stationarity, 60),
        ("helix mechanics", helix_mechanics, 120),
        ("ill-posedness drift", illposed_drift, 5),
        ("Gronwall bound", gronwall_bound, 180),
        ("inequality suite", inequalities, 60),
        ("pointwise estimate", pointwise, 60),
        ("weak formulation", weak_formulation, 120),
        ("weak-strong stability", weak_strong, 300),
    ];
    let mut failures = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let (pass, detail) = match outcome {
            Ok(Ok((pass, detail))) => (pass && in_time, detail),
            Ok(Err(e)) => (false, format!("error: {e}")),
            Err(_) => (false, "panicked".to_string()),
        };
        failures += usize::from(!pass);
        println!(
            "{} {:>2} {name}: {detail} [{:.2}s, limit {limit}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
