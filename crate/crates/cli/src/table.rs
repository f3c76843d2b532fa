//! CSV profiles and JSON summaries.
//!
//! Floats are written with Rust's shortest round-trip formatting, so reading
//! a file back yields bit-identical values.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use srcflow_core::{DensityProfile, PhaseLabel};

pub const PROFILE_HEADER: [&str; 7] = ["r", "v", "rho", "T", "p", "U", "phase"];

pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// One parsed profile row; `phase` is `None` when the column is blank.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub r: f64,
    pub v: f64,
    pub rho: f64,
    pub t: f64,
    pub p: f64,
    pub u: f64,
    pub phase: Option<f64>,
}

pub fn profile_csv(profile: &DensityProfile) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(PROFILE_HEADER)?;
    for rec in &profile.records {
        let phase = rec.phase.map(|l: PhaseLabel| fmt_f64(l.value())).unwrap_or_default();
        w.write_record([
            fmt_f64(rec.r),
            fmt_f64(rec.v),
            fmt_f64(rec.rho),
            fmt_f64(rec.t),
            fmt_f64(rec.p),
            fmt_f64(rec.u),
            phase,
        ])?;
    }
    Ok(w.into_inner()?)
}

/// Two-column `r,v` table.
pub fn series_csv(rs: &[f64], vs: &[f64]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["r", "v"])?;
    for (r, v) in rs.iter().zip(vs) {
        w.write_record([fmt_f64(*r), fmt_f64(*v)])?;
    }
    Ok(w.into_inner()?)
}

pub fn read_profile(path: &Path) -> Result<Vec<Row>> {
    let mut rdr = csv::Reader::from_path(path).with_context(|| format!("cannot read {}", path.display()))?;
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header != PROFILE_HEADER {
        bail!("{}: expected header {}", path.display(), PROFILE_HEADER.join(","));
    }
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64> {
            rec[i].parse::<f64>().with_context(|| format!("row {}: bad number in column {}", line + 1, PROFILE_HEADER[i]))
        };
        let phase = if rec[6].is_empty() { None } else { Some(num(6)?) };
        rows.push(Row { r: num(0)?, v: num(1)?, rho: num(2)?, t: num(3)?, p: num(4)?, u: num(5)?, phase });
    }
    Ok(rows)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

pub fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<std::path::PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let path = dir.join(name);
    let mut f = fs::File::create(&path).with_context(|| format!("cannot create {}", path.display()))?;
    f.write_all(bytes)?;
    Ok(path)
}
