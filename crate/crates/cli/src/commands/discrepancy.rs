use std::io::Write;

use anyhow::Context;
use filamentlab::curve::io::read_curve;
use filamentlab::discrepancy::{
    d_hausdorff, d_parametric_upper, f_infimum, inequality_suite, CurvatureData, DiscrepancyConfig, InequalityEntry,
};
use serde::Serialize;

use super::finite;
use crate::args::DiscrepancyArgs;
use crate::output::{ensure_dir, report, write_json};

#[derive(Serialize)]
struct Resolved<'a> {
    big_gamma: &'a std::path::Path,
    gamma: &'a std::path::Path,
    #[serde(flatten)]
    discrepancy: DiscrepancyConfig,
}

#[derive(Serialize)]
struct Entry {
    name: &'static str,
    applicable: bool,
    lhs: Option<f64>,
    rhs: Option<f64>,
    holds: bool,
    slack: Option<f64>,
}

impl From<&InequalityEntry> for Entry {
    fn from(e: &InequalityEntry) -> Self {
        Entry { name: e.name, applicable: e.applicable, lhs: finite(e.lhs), rhs: finite(e.rhs), holds: e.holds, slack: finite(e.slack) }
    }
}

#[derive(Serialize)]
struct Summary {
    r_gamma: Option<f64>,
    d_parametric_upper: Option<f64>,
    d_hausdorff: f64,
    f: Option<f64>,
    sigma0: Option<f64>,
    inequalities: Vec<Entry>,
}

pub fn run(a: &DiscrepancyArgs) -> anyhow::Result<()> {
    let big = read_curve(&a.big_gamma).with_context(|| format!("reading {}", a.big_gamma.display()))?;
    let gamma = read_curve(&a.gamma).with_context(|| format!("reading {}", a.gamma.display()))?;
    let cfg = DiscrepancyConfig::new(a.r)?;
    let cd = CurvatureData::of(&gamma)?;
    anyhow::ensure!(cd.admits_cutoff(a.r), "cutoff r = {} exceeds r_gamma/8 = {} of the reference curve", a.r, cd.tube());
    let inf = f_infimum(&big, &gamma, &cd, &cfg)?;
    let inequalities = match &inf.sigma {
        Some(s) => inequality_suite(&big, &gamma, s, a.r, &cd, cfg.tol_newton)?.entries.iter().map(Entry::from).collect(),
        None => Vec::new(),
    };
    let summary = Summary {
        r_gamma: finite(cd.r_gamma),
        d_parametric_upper: finite(d_parametric_upper(&big, &gamma, inf.sigma.as_ref())),
        d_hausdorff: d_hausdorff(&big, &gamma),
        f: finite(inf.value),
        sigma0: inf.sigma.as_ref().map(|s| s.sigma0()),
        inequalities,
    };
    let resolved = Resolved { big_gamma: &a.big_gamma, gamma: &a.gamma, discrepancy: cfg };
    let env = report("discrepancy", &resolved, &summary);
    match &a.out {
        Some(dir) => {
            ensure_dir(dir)?;
            write_json(&dir.join("report.json"), &env)
        }
        None => {
            let mut out = std::io::stdout().lock();
            serde_json::to_writer_pretty(&mut out, &env)?;
            writeln!(out)?;
            Ok(())
        }
    }
}
