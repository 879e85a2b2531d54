use std::io::Write;

use anyhow::ensure;
use filamentlab::kida::{derive_params, family_table, KidaRow};
use serde::Serialize;

use crate::args::KidaArgs;
use crate::output::{csv_to_writer, ensure_dir, report, write_csv, write_json};

#[derive(Debug, Serialize)]
struct Resolved {
    mode: &'static str,
    alpha: Option<f64>,
    beta: Option<f64>,
    delta: Option<f64>,
    delta_from_m: bool,
    sigma: Option<f64>,
    m: Vec<u32>,
    rescale: bool,
}

fn direct(alpha: f64, beta: f64, delta: Option<f64>, m: &[u32], rescale: bool) -> anyhow::Result<Vec<KidaRow>> {
    m.iter()
        .map(|&m| {
            let mf = f64::from(m);
            let d = delta.unwrap_or(1.0 / (mf * mf - 1.0));
            let p = derive_params(alpha, beta, d, m)?;
            let p = if rescale { p.rescaled_to_2pi() } else { p };
            Ok(KidaRow::new(1.0 - beta / alpha, &p))
        })
        .collect()
}

pub fn run(a: &KidaArgs) -> anyhow::Result<()> {
    let rows = match a.sigma {
        Some(sigma) => family_table(sigma, &a.m, a.rescale)?,
        None => {
            let (Some(alpha), Some(beta)) = (a.alpha, a.beta) else {
                anyhow::bail!("give either --sigma or both --alpha and --beta");
            };
            ensure!(a.delta.is_some() || a.delta_from_m, "give --delta or --delta-from-m");
            ensure!(alpha != 0.0, "alpha must be non-zero");
            direct(alpha, beta, a.delta, &a.m, a.rescale)?
        }
    };
    let Some(dir) = &a.out else {
        let mut out = std::io::stdout().lock();
        csv_to_writer(&mut out, &rows)?;
        out.flush()?;
        return Ok(());
    };
    let resolved = Resolved {
        mode: if a.sigma.is_some() { "family" } else { "direct" },
        alpha: a.alpha,
        beta: a.beta,
        delta: a.delta,
        delta_from_m: a.delta_from_m,
        sigma: a.sigma,
        m: a.m.clone(),
        rescale: a.rescale,
    };
    ensure_dir(dir)?;
    write_csv(&dir.join("table.csv"), &rows)?;
    write_json(&dir.join("report.json"), &report("kida", &resolved, &rows))
}
