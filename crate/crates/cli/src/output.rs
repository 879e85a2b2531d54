use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::Context;
use filamentlab::curve::io::{write_nodes, Sidecar};
use filamentlab::Vec3;
use serde::Serialize;

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, fill: impl FnOnce(&mut dyn Write) -> anyhow::Result<()>) -> anyhow::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))?;
    {
        let mut w = io::BufWriter::new(tmp.as_file_mut());
        fill(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn ensure_dir(dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

pub fn write_json(path: &Path, value: &impl Serialize) -> anyhow::Result<()> {
    write_atomic(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)?;
        Ok(())
    })
}

pub fn csv_to_writer<R: Serialize>(w: &mut dyn Write, rows: &[R]) -> anyhow::Result<()> {
    let mut c = csv::Writer::from_writer(w);
    for row in rows {
        c.serialize(row)?;
    }
    c.flush()?;
    Ok(())
}

pub fn write_csv<R: Serialize>(path: &Path, rows: &[R]) -> anyhow::Result<()> {
    write_atomic(path, |w| csv_to_writer(w, rows))
}

/// Node CSV plus its JSON sidecar, both written atomically.
pub fn write_nodes_with_sidecar(path: &Path, period: f64, pitch: Vec3, points: &[Vec3]) -> anyhow::Result<()> {
    write_atomic(path, |w| Ok(write_nodes(w, period, points)?))?;
    let side = Sidecar { period, pitch: pitch.into(), n: points.len() };
    write_json(&filamentlab::curve::io::sidecar_path(path), &side)
}

/// Every JSON report: the command, its fully resolved config, and the result.
#[derive(Serialize)]
pub struct Envelope<'a, C: Serialize, R: Serialize> {
    pub command: &'a str,
    pub version: &'a str,
    pub config: &'a C,
    pub report: &'a R,
}

pub fn report<'a, C: Serialize, R: Serialize>(command: &'a str, config: &'a C, report: &'a R) -> Envelope<'a, C, R> {
    Envelope { command, version: env!("CARGO_PKG_VERSION"), config, report }
}

/// 0/1 for gnuplot-friendly boolean columns.
pub fn flag(b: bool) -> u8 {
    u8::from(b)
}
