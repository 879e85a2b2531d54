use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

use filamentlab::curve::{integrate_tangent, io, pitch_of, SphereField};
use filamentlab::discrepancy::{f_infimum, inequality_suite, CurvatureData, DiscrepancyConfig};
use filamentlab::elliptic;
use filamentlab::estimates::{
    gronwall_experiment, illposed_experiment, pointwise_estimate_check, weak_formulation_residual, GronwallConfig,
    RigidFlow, TubularField,
};
use filamentlab::initial::{circle, SymmetricPerturbation};
use filamentlab::kida::{base_family, illposed_family, simple_helix, HelixParams};
use filamentlab::smap::{evolve, invariants, EvolveConfig};
use filamentlab::{rng, Vec3};
use serde::Serialize;

use super::CheckFailed;
use crate::args::SelftestArgs;
use crate::output::{ensure_dir, report, write_json};

type Check = fn() -> anyhow::Result<(bool, String)>;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn base_family_identities() -> anyhow::Result<(bool, String)> {
    let mut worst = 0.0f64;
    for m in [2u32, 5, 10, 50] {
        let p = base_family(m)?;
        let root = (f64::from(m).powi(2) - 1.0).sqrt();
        for e in [rel(p.omega(), root), rel(p.a(), 1.0), rel(p.v(), 1.0), rel(p.c(), root), rel(p.ell(), 2.0 * PI)] {
            worst = worst.max(e);
        }
    }
    Ok((worst < 1e-10, format!("max relative error {worst:.2e}")))
}

fn elliptic_special_values() -> anyhow::Result<(bool, String)> {
    let k0 = (elliptic::complete_k(0.0)? - FRAC_PI_2).abs();
    let p0 = (elliptic::complete_pi(0.0, 0.0)? - FRAC_PI_2).abs();
    let k = 0.7f64;
    let kp = (1.0 - k * k).sqrt();
    let legendre = (elliptic::complete_e(k)? * elliptic::complete_k(kp)? + elliptic::complete_e(kp)? * elliptic::complete_k(k)?
        - elliptic::complete_k(k)? * elliptic::complete_k(kp)?
        - FRAC_PI_2)
        .abs();
    let (sn, cn, dn) = elliptic::jacobi_sn_cn_dn(0.9, k)?;
    let pyth = (sn * sn + cn * cn - 1.0).abs().max((dn * dn + k * k * sn * sn - 1.0).abs());
    Ok((
        k0 < 1e-14 && p0 < 1e-14 && legendre < 1e-10 && pyth < 1e-14,
        format!("K(0) {k0:.1e}, Pi(0,0) {p0:.1e}, Legendre {legendre:.1e}, sn/cn/dn {pyth:.1e}"),
    ))
}

fn exact_residual() -> anyhow::Result<(bool, String)> {
    let p = illposed_family(1.0, 20)?;
    let c = p.to_quasicurve(0.0, 512)?;
    let d1 = c.derivative_at_nodes(1)?;
    let d2 = c.derivative_at_nodes(2)?;
    let mo = p.motion();
    let worst = (0..c.n())
        .map(|j| {
            let rigid = -mo.slip * d1[j] + mo.omega * Vec3::z().cross(&c.node(j)) + Vec3::z() * mo.speed;
            (rigid - d1[j].cross(&d2[j])).norm()
        })
        .fold(0.0, f64::max);
    Ok((worst < 1e-6, format!("sup residual {worst:.2e}")))
}

fn circle_stationary() -> anyhow::Result<(bool, String)> {
    let u = circle(128)?;
    let traj = evolve(&u, &EvolveConfig::new(0.1, 1e-4).with_save_every(500))?;
    let worst = traj
        .states
        .iter()
        .flat_map(|s| s.samples().iter().zip(u.samples()).map(|(a, b)| (a - b).norm()))
        .fold(0.0, f64::max);
    Ok((worst < 1e-8, format!("sup deviation {worst:.2e} to t=0.1")))
}

fn perturbation(size: f64) -> anyhow::Result<SphereField> {
    Ok(SymmetricPerturbation::random(&mut rng::seeded(2026), 4).field_with_size(128, size)?.0)
}

fn conserved_quantities() -> anyhow::Result<(bool, String)> {
    let u = perturbation(1e-2)?;
    let traj = evolve(&u, &EvolveConfig::new(0.1, 1e-4).with_save_every(100))?;
    let rep = invariants(&traj)?;
    let de = rep.max_relative_energy_drift();
    let di = rep.max_relative_second_drift();
    let a0 = pitch_of(&traj.states[0]);
    let da = traj.states.iter().map(|s| (pitch_of(s) - a0).norm()).fold(0.0, f64::max);
    Ok((
        de < 1e-6 && di < 1e-5 && da < 1e-8 && rep.h2_bound_holds(),
        format!("dE/E {de:.2e}, dI {di:.2e}, pitch {da:.2e}, H2 bound {}", rep.h2_bound_holds()),
    ))
}

fn helix_speed() -> anyhow::Result<(bool, String)> {
    let h = HelixParams::new(0.1, 0.2)?;
    let sol = simple_helix(&h, 64)?;
    let d1 = sol.curve.derivative_at_nodes(1)?;
    let d2 = sol.curve.derivative_at_nodes(2)?;
    let identity = (0..64)
        .map(|j| (d1[j].cross(&d2[j]) + d1[j] * sol.slip_speed - Vec3::x() * sol.translation_speed).norm())
        .fold(0.0, f64::max);
    let speed = rel(h.base_point_speed(), 0.01 / 0.05f64.powf(1.5));
    Ok((identity < 1e-10 && speed < 1e-10, format!("identity {identity:.2e}, base-point speed {speed:.2e}")))
}

fn drift_symmetry() -> anyhow::Result<(bool, String)> {
    let zero = illposed_experiment(0.0, &[50, 100], None)?;
    let z = zero.drift_values.iter().fold(0.0f64, |a, d| a.max(d.abs()));
    let plus = illposed_experiment(1.0, &[50, 100], None)?;
    let minus = illposed_experiment(-1.0, &[50, 100], None)?;
    let sym = plus.drift_values.iter().zip(&minus.drift_values).map(|(a, b)| (a.abs() - b.abs()).abs()).fold(0.0, f64::max);
    Ok((z < 1e-10 && sym < 1e-10, format!("zero amplitude {z:.1e}, sign symmetry {sym:.1e}")))
}

fn gronwall_short() -> anyhow::Result<(bool, String)> {
    let u = circle(128)?;
    let v = perturbation(1e-3)?;
    let rep = gronwall_experiment(&u, &v, &GronwallConfig::new(5e-3, 1e-4).with_save_every(10))?;
    let tube = (rep.constants.r - rep.constants.r_gamma / 8.0).abs() < 1e-12;
    let bound = rep.rows.iter().all(|r| r.f <= r.bound * (1.0 + 1e-3) + filamentlab::estimates::GRONWALL_ABS_TOL);
    Ok((
        tube && bound && rep.verdict,
        format!("K {:.1}, F(0) {:.2e}, T_r {:.4}, {} rows, verdict {}", rep.constants.k, rep.f0, rep.t_r, rep.rows.len(), rep.verdict),
    ))
}

fn inequality_sample() -> anyhow::Result<(bool, String)> {
    let g = integrate_tangent(&circle(128)?, Vec3::zeros())?;
    let cd = CurvatureData::of(&g)?;
    let big = integrate_tangent(&perturbation(1e-3)?, Vec3::zeros())?;
    let sigma = f_infimum(&big, &g, &cd, &DiscrepancyConfig::new(0.125)?)?
        .sigma
        .ok_or_else(|| anyhow::anyhow!("no admissible reparametrization"))?;
    let rep = inequality_suite(&big, &g, &sigma, 0.125, &cd, 1e-12)?;
    let applied = rep.entries.iter().filter(|e| e.applicable).count();
    Ok((rep.all_hold() && applied > 0, format!("{applied} applicable, all hold {}", rep.all_hold())))
}

fn pointwise_sample() -> anyhow::Result<(bool, String)> {
    let flow = RigidFlow::kida(&illposed_family(1.0, 5)?, 256)?;
    let rep = pointwise_estimate_check(&flow, 0.0, 200, flow.curvature().tube(), 42)?;
    Ok((rep.violations == 0 && rep.evaluated > 0, format!("{} evaluated, {} violations", rep.evaluated, rep.violations)))
}

fn weak_form_identical() -> anyhow::Result<(bool, String)> {
    let gamma = RigidFlow::unit_circle(64)?;
    let field = TubularField::new(&gamma, 0.125)?;
    let times: Vec<f64> = (0..=10).map(|i| f64::from(i) * 1e-3).collect();
    let curves: Vec<_> = times.iter().map(|&t| gamma.curve_at(t)).collect();
    let res = weak_formulation_residual(&field, &curves, &times)?.max_residual();
    Ok((res < 1e-6, format!("translating circle residual {res:.2e}")))
}

fn csv_round_trip() -> anyhow::Result<(bool, String)> {
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("curve.csv");
    let c = base_family(5)?.to_quasicurve(0.0, 64)?;
    io::write_curve(&path, &c)?;
    let back = io::read_curve(&path)?;
    let same = back.node_points() == c.node_points() && back.period() == c.period() && back.pitch() == c.pitch();
    Ok((same, format!("bit-exact {same}")))
}

const CHECKS: [(&str, Check); 12] = [
    ("kida base family", base_family_identities),
    ("elliptic special values", elliptic_special_values),
    ("exact solution residual", exact_residual),
    ("circle stationary", circle_stationary),
    ("conserved quantities", conserved_quantities),
    ("helix mechanics", helix_speed),
    ("drift symmetry", drift_symmetry),
    ("gronwall short run", gronwall_short),
    ("inequality suite", inequality_sample),
    ("pointwise sample", pointwise_sample),
    ("weak form identical pair", weak_form_identical),
    ("csv round trip", csv_round_trip),
];

#[derive(Serialize)]
struct CheckResult {
    name: &'static str,
    pass: bool,
    detail: String,
}

pub fn run(a: &SelftestArgs) -> anyhow::Result<()> {
    let start = Instant::now();
    let results: Vec<CheckResult> = CHECKS
        .iter()
        .map(|&(name, check)| {
            let (pass, detail) = check().unwrap_or_else(|e| (false, format!("error: {e:#}")));
            println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
            CheckResult { name, pass, detail }
        })
        .collect();
    let failed = results.iter().filter(|r| !r.pass).count();
    println!("{} of {} checks passed in {:.1} s", results.len() - failed, results.len(), start.elapsed().as_secs_f64());
    if let Some(dir) = &a.out {
        ensure_dir(dir)?;
        let names: Vec<&str> = CHECKS.iter().map(|c| c.0).collect();
        write_json(&dir.join("report.json"), &report("selftest", &names, &results))?;
    }
    if failed > 0 {
        return Err(CheckFailed(format!("{failed} selftest checks failed")).into());
    }
    Ok(())
}
