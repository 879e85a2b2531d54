use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{pitch_of, QuasiCurve, SphereField};
use crate::{Error, Result, Vec3};

/// Metadata written next to a node CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub period: f64,
    pub pitch: [f64; 3],
    #[serde(rename = "N")]
    pub n: usize,
}

/// `foo.csv` → `foo.json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

/// Writes `s,x,y,z` rows. f64 Display is shortest round-trip, so values survive exactly.
pub fn write_nodes<W: Write>(writer: W, period: f64, points: &[Vec3]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["s", "x", "y", "z"])?;
    let h = period / points.len() as f64;
    for (j, p) in points.iter().enumerate() {
        w.write_record([
            (j as f64 * h).to_string(),
            p.x.to_string(),
            p.y.to_string(),
            p.z.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `s,x,y,z` rows and returns the points (the s column is checked, not trusted).
pub fn read_nodes<R: Read>(reader: R, sidecar: &Sidecar) -> Result<Vec<Vec3>> {
    let mut r = csv::Reader::from_reader(reader);
    let headers = r.headers()?.clone();
    if headers.iter().map(str::trim).collect::<Vec<_>>() != ["s", "x", "y", "z"] {
        return Err(Error::Format(format!("expected header s,x,y,z, found {:?}", headers)));
    }
    let h = sidecar.period / sidecar.n as f64;
    let mut points = Vec::with_capacity(sidecar.n);
    for (j, rec) in r.records().enumerate() {
        let rec = rec?;
        if rec.len() != 4 {
            return Err(Error::Format(format!("row {j}: expected 4 fields")));
        }
        let mut vals = [0.0; 4];
        for (v, field) in vals.iter_mut().zip(rec.iter()) {
            *v = field
                .trim()
                .parse()
                .map_err(|_| Error::Format(format!("row {j}: cannot parse {field:?}")))?;
        }
        let expected = j as f64 * h;
        if (vals[0] - expected).abs() > 1e-9 * sidecar.period.max(1.0) {
            return Err(Error::Format(format!("row {j}: node s={} but expected {expected}", vals[0])));
        }
        points.push(Vec3::new(vals[1], vals[2], vals[3]));
    }
    if points.len() != sidecar.n {
        return Err(Error::LengthMismatch { expected: sidecar.n, got: points.len() });
    }
    Ok(points)
}

fn write_sidecar(path: &Path, sidecar: &Sidecar) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, sidecar)?;
    f.write_all(b"\n")?;
    f.flush()?;
    Ok(())
}

fn read_sidecar(path: &Path) -> Result<Sidecar> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}

/// Writes Γ(s_j) rows to `csv` and the sidecar next to it.
pub fn write_curve(csv: &Path, curve: &QuasiCurve) -> Result<()> {
    let p = curve.pitch();
    let sidecar = Sidecar { period: curve.period(), pitch: [p.x, p.y, p.z], n: curve.n() };
    write_nodes(BufWriter::new(File::create(csv)?), curve.period(), &curve.node_points())?;
    write_sidecar(&sidecar_path(csv), &sidecar)
}

pub fn read_curve(csv: &Path) -> Result<QuasiCurve> {
    let sidecar = read_sidecar(&sidecar_path(csv))?;
    let points = read_nodes(BufReader::new(File::open(csv)?), &sidecar)?;
    QuasiCurve::from_points(&points, sidecar.period, Vec3::from(sidecar.pitch))
}

/// Writes u(s_j) rows; the sidecar pitch is ∫u.
pub fn write_field(csv: &Path, field: &SphereField) -> Result<()> {
    let p = pitch_of(field);
    let sidecar = Sidecar { period: field.period(), pitch: [p.x, p.y, p.z], n: field.n() };
    write_nodes(BufWriter::new(File::create(csv)?), field.period(), field.samples())?;
    write_sidecar(&sidecar_path(csv), &sidecar)
}

pub fn read_field(csv: &Path) -> Result<SphereField> {
    let sidecar = read_sidecar(&sidecar_path(csv))?;
    let points = read_nodes(BufReader::new(File::open(csv)?), &sidecar)?;
    SphereField::new(points, sidecar.period)
}
