//! Point-stream records and their CSV / JSON encodings.

use std::io::Write;

use expoly::{CurveSample, SurfaceSample};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Where a record sits in parameter space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Params {
    Curve { t: f64 },
    Surface { u: f64, v: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointRecord {
    pub i: usize,
    #[serde(flatten)]
    pub params: Params,
    pub point: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lifted: Option<Vec<f64>>,
}

impl PointRecord {
    pub fn from_curve(s: &CurveSample, lifted: bool) -> Self {
        PointRecord {
            i: s.index,
            params: Params::Curve { t: s.t },
            point: s.point.clone(),
            lifted: lifted.then(|| s.lifted.clone()),
        }
    }

    pub fn from_surface(s: &SurfaceSample, lifted: bool) -> Self {
        PointRecord {
            i: s.index,
            params: Params::Surface { u: s.u, v: s.v },
            point: s.point.clone(),
            lifted: lifted.then(|| s.lifted.clone()),
        }
    }
}

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn coordinate_names(d: usize) -> Vec<String> {
    const NAMES: [&str; 4] = ["x", "y", "z", "w"];
    (0..d)
        .map(|k| NAMES.get(k).map_or_else(|| format!("x{k}"), |s| s.to_string()))
        .collect()
}

pub fn csv_header(first: &PointRecord) -> String {
    let mut cols: Vec<String> = vec!["i".into()];
    match first.params {
        Params::Curve { .. } => cols.push("t".into()),
        Params::Surface { .. } => cols.extend(["u".into(), "v".into()]),
    }
    cols.extend(coordinate_names(first.point.len()));
    if let Some(l) = &first.lifted {
        cols.extend((0..l.len()).map(|k| format!("l{k}")));
    }
    cols.join(",")
}

pub fn csv_row(r: &PointRecord) -> String {
    let mut cols = vec![r.i.to_string()];
    match r.params {
        Params::Curve { t } => cols.push(fmt_num(t)),
        Params::Surface { u, v } => cols.extend([fmt_num(u), fmt_num(v)]),
    }
    cols.extend(r.point.iter().map(|&x| fmt_num(x)));
    if let Some(l) = &r.lifted {
        cols.extend(l.iter().map(|&x| fmt_num(x)));
    }
    cols.join(",")
}

pub fn write_stream(out: &mut dyn Write, records: &[PointRecord], format: Format) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            if let Some(first) = records.first() {
                writeln!(out, "{}", csv_header(first))?;
            }
            for r in records {
                writeln!(out, "{}", csv_row(r))?;
            }
        }
        Format::Json => {
            serde_json::to_writer(&mut *out, records)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Summary written next to a built-in example's stream.
#[derive(Clone, Debug, Serialize)]
pub struct ErrorReport {
    pub max_deviation: f64,
    pub runtime_ms: f64,
    pub points: usize,
    pub method: String,
}
