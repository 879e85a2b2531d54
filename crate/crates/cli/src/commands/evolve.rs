use std::path::PathBuf;

use anyhow::{bail, Context};
use filamentlab::curve::{io, pitch_of, SphereField};
use filamentlab::initial;
use filamentlab::kida::{base_family, illposed_family};
use filamentlab::smap::{evolve, invariants, reconstruct_binormal, EvolveConfig};
use filamentlab::Vec3;
use serde::Serialize;

use crate::args::EvolveArgs;
use crate::config::grid;
use crate::output::{ensure_dir, report, write_csv, write_json, write_nodes_with_sidecar};

/// Parsed form of `--init`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Init {
    Circle,
    Constant,
    Kida { m: u32, sigma: Option<f64> },
    File { path: PathBuf },
}

impl Init {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let parts: Vec<&str> = text.splitn(3, ':').collect();
        Ok(match parts.as_slice() {
            ["circle"] => Init::Circle,
            ["constant"] => Init::Constant,
            ["kida", m] => Init::Kida { m: m.parse().context("kida:<m> needs an integer m")?, sigma: None },
            ["kida", m, s] => Init::Kida {
                m: m.parse().context("kida:<m>:<sigma> needs an integer m")?,
                sigma: Some(s.parse().context("kida:<m>:<sigma> needs a numeric sigma")?),
            },
            ["file", ..] => Init::File { path: PathBuf::from(&text["file:".len()..]) },
            _ => bail!("unknown --init {text:?}; expected circle, constant, kida:<m>[:<sigma>] or file:<path>"),
        })
    }

    fn build(&self, n: usize) -> anyhow::Result<SphereField> {
        Ok(match self {
            Init::Circle => initial::circle(n)?,
            Init::Constant => initial::constant(n, 2.0 * std::f64::consts::PI, Vec3::z())?,
            Init::Kida { m, sigma: None } => base_family(*m)?.tangent_field(0.0, n)?,
            Init::Kida { m, sigma: Some(s) } => illposed_family(*s, *m)?.tangent_field(0.0, n)?,
            Init::File { path } => io::read_field(path).with_context(|| format!("reading {}", path.display()))?,
        })
    }
}

#[derive(Serialize)]
struct Resolved {
    n: usize,
    init: Init,
    #[serde(flatten)]
    run: EvolveConfig,
}

#[derive(Serialize)]
struct InvariantRow {
    t: f64,
    #[serde(rename = "E")]
    energy: f64,
    #[serde(rename = "I")]
    second: f64,
}

#[derive(Serialize)]
struct Summary {
    n: usize,
    period: f64,
    dt_used: f64,
    pitch: [f64; 3],
    times: Vec<f64>,
    c_w: Vec<[f64; 3]>,
    max_relative_energy_drift: f64,
    max_relative_second_drift: f64,
    max_pitch_drift: f64,
    h2_seminorm: Vec<f64>,
    h2_bound: f64,
    h2_bound_holds: bool,
}

pub fn run(a: &EvolveArgs) -> anyhow::Result<()> {
    let init = Init::parse(&a.init)?;
    let u0 = init.build(a.n)?;
    let n = u0.n();
    if !matches!(init, Init::File { .. }) {
        grid(n)?;
    }
    let cfg = EvolveConfig::new(a.t_end, a.dt).with_save_every(a.save_every);
    let (_, dt_used) = cfg.schedule()?;
    let traj = evolve(&u0, &cfg)?;
    let curves = reconstruct_binormal(&traj)?;
    let inv = invariants(&traj)?;

    ensure_dir(&a.out)?;
    for (i, (u, g)) in traj.states.iter().zip(&curves).enumerate() {
        write_nodes_with_sidecar(&a.out.join(format!("u_{i:04}.csv")), u.period(), pitch_of(u), u.samples())?;
        write_nodes_with_sidecar(&a.out.join(format!("gamma_{i:04}.csv")), g.period(), g.pitch(), &g.node_points())?;
    }
    let rows: Vec<InvariantRow> = (0..inv.times.len())
        .map(|i| InvariantRow { t: inv.times[i], energy: inv.energy[i], second: inv.second[i] })
        .collect();
    write_csv(&a.out.join("invariants.csv"), &rows)?;

    let a0 = pitch_of(&traj.states[0]);
    let summary = Summary {
        n,
        period: u0.period(),
        dt_used,
        pitch: a0.into(),
        times: traj.times.clone(),
        c_w: traj.c_w.iter().map(|&c| c.into()).collect(),
        max_relative_energy_drift: inv.max_relative_energy_drift(),
        max_relative_second_drift: inv.max_relative_second_drift(),
        max_pitch_drift: traj.states.iter().map(|s| (pitch_of(s) - a0).norm()).fold(0.0, f64::max),
        h2_seminorm: inv.h2_seminorm.clone(),
        h2_bound: inv.h2_bound,
        h2_bound_holds: inv.h2_bound_holds(),
    };
    let resolved = Resolved { n, init, run: cfg };
    write_json(&a.out.join("report.json"), &report("evolve", &resolved, &summary))
}
