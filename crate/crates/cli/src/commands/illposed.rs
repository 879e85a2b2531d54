use std::io::Write;

use filamentlab::estimates::{illposed_experiment, CrossCheckConfig, DriftReport};
use serde::Serialize;

use crate::args::IllposedArgs;
use crate::config::{load, IllposedExperiment};
use crate::output::{csv_to_writer, ensure_dir, report, write_csv, write_json};

#[derive(Serialize)]
struct DriftRow {
    m: u32,
    drift: f64,
    rescaled_drift: f64,
    limit: f64,
}

fn rows(rep: &DriftReport) -> Vec<DriftRow> {
    rep.m_values
        .iter()
        .zip(&rep.drift_values)
        .zip(&rep.rescaled_drift_values)
        .map(|((&m, &drift), &rescaled_drift)| DriftRow { m, drift, rescaled_drift, limit: rep.limit })
        .collect()
}

#[derive(Serialize)]
struct Summary<'a> {
    #[serde(flatten)]
    drift: &'a DriftReport,
    approaches_limit: bool,
}

pub fn run(a: &IllposedArgs) -> anyhow::Result<()> {
    let cfg = match &a.config {
        Some(path) => load::<IllposedExperiment>(path)?,
        None => IllposedExperiment {
            sigma_tilde: a.sigma.expect("required by the parser"),
            m: a.m.clone(),
            cross_check: a.cross_check.then(CrossCheckConfig::default),
        },
    };
    cfg.validate()?;
    let rep = illposed_experiment(cfg.sigma_tilde, &cfg.m, cfg.cross_check)?;
    let table = rows(&rep);
    let Some(dir) = &a.out else {
        let mut out = std::io::stdout().lock();
        csv_to_writer(&mut out, &table)?;
        out.flush()?;
        return Ok(());
    };
    ensure_dir(dir)?;
    write_csv(&dir.join("drift.csv"), &table)?;
    let summary = Summary { drift: &rep, approaches_limit: rep.approaches_limit() };
    write_json(&dir.join("report.json"), &report("illposed", &cfg, &summary))
}
