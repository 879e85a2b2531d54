use anyhow::Context;
use filamentlab::estimates::{
    gronwall_experiment, pointwise_estimate_check, weak_formulation_residual, weak_strong_experiment, GronwallReport,
    PointwiseReport, RigidFlow, TubularField, WeakFormReport, WeakStrongReport,
};
use filamentlab::curve::QuasiCurve;
use filamentlab::smap::{evolve, reconstruct_binormal, EvolveConfig};
use rayon::prelude::*;
use serde::Serialize;

use super::finite;
use crate::args::ConfigArgs;
use crate::config::{load, FrameSource, GronwallExperiment, PointwiseExperiment, WeakFormExperiment, WeakStrongExperiment};
use crate::output::{ensure_dir, flag, report, write_csv, write_json};

#[derive(Serialize)]
struct GronwallSeriesRow {
    t: f64,
    #[serde(rename = "F")]
    f: f64,
    bound: f64,
    sigma0: f64,
    d_parametric_upper: f64,
    in_window: u8,
    holds: u8,
}

pub fn gronwall(a: &ConfigArgs) -> anyhow::Result<()> {
    let cfg: GronwallExperiment = load(&a.config)?;
    cfg.validate()?;
    let u0 = cfg.smooth.build(cfg.n).context("building the smooth initial datum")?;
    let v0 = cfg.rough.build(cfg.n).context("building the rough initial datum")?;
    let rep: GronwallReport = gronwall_experiment(&u0, &v0, &cfg.run)?;
    let rows: Vec<GronwallSeriesRow> = rep
        .rows
        .iter()
        .map(|r| GronwallSeriesRow {
            t: r.t,
            f: r.f,
            bound: r.bound,
            sigma0: r.sigma0,
            d_parametric_upper: r.d_parametric_upper,
            in_window: flag(r.in_window),
            holds: flag(r.holds),
        })
        .collect();
    ensure_dir(&a.out)?;
    write_csv(&a.out.join("series.csv"), &rows)?;
    write_json(&a.out.join("report.json"), &report("gronwall", &cfg, &rep))
}

#[derive(Serialize)]
struct WeakStrongSeriesRow {
    run: usize,
    t: f64,
    sigma: f64,
    distance: f64,
    ratio: f64,
}

#[derive(Serialize)]
struct WeakStrongRun {
    run: usize,
    applicable: bool,
    initial_distance: f64,
    empirical_c: Option<f64>,
    ratio_at_compare: Option<f64>,
    exit_time: Option<f64>,
}

#[derive(Serialize)]
struct WeakStrongSummary {
    compare_at: f64,
    runs: Vec<WeakStrongRun>,
    /// max/min of the compared ratios over applicable runs.
    spread: Option<f64>,
}

pub fn weak_strong(a: &ConfigArgs) -> anyhow::Result<()> {
    let cfg: WeakStrongExperiment = load(&a.config)?;
    cfg.validate()?;
    let u0 = cfg.smooth.build(cfg.n).context("building the smooth initial datum")?;
    let reports: Vec<WeakStrongReport> = cfg
        .rough
        .par_iter()
        .enumerate()
        .map(|(i, spec)| {
            let v0 = spec.build(cfg.n).with_context(|| format!("building rough datum {i}"))?;
            Ok(weak_strong_experiment(&u0, &v0, &cfg.run)?)
        })
        .collect::<anyhow::Result<_>>()?;
    let compare_at = cfg.compare_at.unwrap_or(cfg.run.t_end);
    let rows: Vec<WeakStrongSeriesRow> = reports
        .iter()
        .enumerate()
        .flat_map(|(run, rep)| {
            rep.rows.iter().map(move |r| WeakStrongSeriesRow { run, t: r.t, sigma: r.sigma, distance: r.distance, ratio: r.ratio })
        })
        .collect();
    let runs: Vec<WeakStrongRun> = reports
        .iter()
        .enumerate()
        .map(|(run, rep)| WeakStrongRun {
            run,
            applicable: rep.applicable,
            initial_distance: rep.initial_distance,
            empirical_c: finite(rep.empirical_c),
            ratio_at_compare: if rep.exit_time.is_none() { rep.ratio_at(compare_at) } else { None },
            exit_time: rep.exit_time,
        })
        .collect();
    let ratios: Vec<f64> = runs.iter().filter_map(|r| r.ratio_at_compare).collect();
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &q| (l.min(q), h.max(q)));
    let spread = (!ratios.is_empty() && lo > 0.0).then(|| hi / lo);
    ensure_dir(&a.out)?;
    write_csv(&a.out.join("series.csv"), &rows)?;
    let summary = WeakStrongSummary { compare_at, runs, spread };
    write_json(&a.out.join("report.json"), &report("weakstrong", &cfg, &summary))
}

#[derive(Serialize)]
struct PointwiseRow {
    s0: f64,
    distance: f64,
    lhs: f64,
    rhs: f64,
    k: f64,
    holds: u8,
}

#[derive(Serialize)]
struct PointwiseSummary<'a> {
    t0: f64,
    r: f64,
    requested: usize,
    evaluated: usize,
    rejected: usize,
    violations: usize,
    max_ratio: f64,
    slack: f64,
    fd: &'a filamentlab::estimates::FdSettings,
}

fn cutoff(flow: &RigidFlow, r: Option<f64>) -> f64 {
    r.unwrap_or_else(|| flow.curvature().tube())
}

pub fn pointwise(a: &ConfigArgs) -> anyhow::Result<()> {
    let cfg: PointwiseExperiment = load(&a.config)?;
    cfg.validate()?;
    let flow = cfg.flow.build(cfg.n)?;
    let rep: PointwiseReport = pointwise_estimate_check(&flow, cfg.t0, cfg.samples, cutoff(&flow, cfg.r), cfg.seed)?;
    let rows: Vec<PointwiseRow> = rep
        .samples
        .iter()
        .map(|s| PointwiseRow { s0: s.s0, distance: s.distance, lhs: s.lhs, rhs: s.rhs, k: s.k, holds: flag(s.holds) })
        .collect();
    ensure_dir(&a.out)?;
    write_csv(&a.out.join("samples.csv"), &rows)?;
    let summary = PointwiseSummary {
        t0: rep.t0,
        r: rep.r,
        requested: rep.requested,
        evaluated: rep.evaluated,
        rejected: rep.rejected,
        violations: rep.violations,
        max_ratio: rep.max_ratio,
        slack: rep.slack,
        fd: &rep.fd,
    };
    write_json(&a.out.join("report.json"), &report("pointwise", &cfg, &summary))
}

#[derive(Serialize)]
struct ResidualRow {
    interval: f64,
    t: f64,
    lhs: f64,
    rhs: f64,
    residual: f64,
    max_distance: f64,
}

#[derive(Serialize)]
struct IntervalSummary {
    interval: f64,
    frames: usize,
    max_residual: f64,
}

#[derive(Serialize)]
struct WeakFormSummary {
    r: f64,
    intervals: Vec<IntervalSummary>,
    /// max residual at one interval over the next, in the listed order.
    ratios: Vec<f64>,
}

fn centroid(c: &QuasiCurve) -> filamentlab::Vec3 {
    c.node_points().iter().sum::<filamentlab::Vec3>() / c.n() as f64
}

fn frames(cfg: &WeakFormExperiment, gamma: &RigidFlow, h: f64) -> anyhow::Result<(Vec<QuasiCurve>, Vec<f64>)> {
    match &cfg.big_gamma {
        FrameSource::Rigid { flow } => {
            let big = flow.build(cfg.n)?;
            let k = (cfg.t_end / h).round() as usize;
            let times: Vec<f64> = (0..=k).map(|i| i as f64 * h).collect();
            Ok((times.iter().map(|&t| big.curve_at(t)).collect(), times))
        }
        FrameSource::Evolved { init, dt } => {
            let u0 = init.build(cfg.n)?;
            let every = (h / dt).round() as usize;
            let traj = evolve(&u0, &EvolveConfig::new(cfg.t_end, *dt).with_save_every(every))?;
            let curves = reconstruct_binormal(&traj)?;
            let offset = centroid(&gamma.curve_at(0.0)) - centroid(&curves[0]);
            Ok((curves.iter().map(|c| c.translated(offset)).collect(), traj.times))
        }
    }
}

pub fn weak_form(a: &ConfigArgs) -> anyhow::Result<()> {
    let cfg: WeakFormExperiment = load(&a.config)?;
    cfg.validate()?;
    let gamma = cfg.gamma.build(cfg.n)?;
    let field = TubularField::new(&gamma, cutoff(&gamma, cfg.r))?;
    let reports: Vec<(f64, usize, WeakFormReport)> = cfg
        .save_intervals
        .iter()
        .map(|&h| {
            let (curves, times) = frames(&cfg, &gamma, h)?;
            Ok((h, times.len(), weak_formulation_residual(&field, &curves, &times)?))
        })
        .collect::<anyhow::Result<_>>()?;
    let rows: Vec<ResidualRow> = reports
        .iter()
        .flat_map(|(h, _, rep)| {
            rep.rows.iter().map(move |r| ResidualRow {
                interval: *h,
                t: r.t,
                lhs: r.lhs,
                rhs: r.rhs,
                residual: r.residual,
                max_distance: r.max_distance,
            })
        })
        .collect();
    let intervals: Vec<IntervalSummary> = reports
        .iter()
        .map(|(h, frames, rep)| IntervalSummary { interval: *h, frames: *frames, max_residual: rep.max_residual() })
        .collect();
    let ratios = intervals.windows(2).map(|w| w[0].max_residual / w[1].max_residual).collect();
    ensure_dir(&a.out)?;
    write_csv(&a.out.join("residuals.csv"), &rows)?;
    let summary = WeakFormSummary { r: field.r(), intervals, ratios };
    write_json(&a.out.join("report.json"), &report("weakform", &cfg, &summary))
}
