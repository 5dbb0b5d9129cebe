//! Endpoint deviations for the intrinsic curve over a range of step counts.

use std::io::Write;

use crate::error::CliResult;
use crate::examples::{example1_curve, example1_endpoint_deviation, Method};
use crate::output::fmt_num;

pub const POINT_COUNTS: [usize; 8] = [10, 20, 100, 200, 1000, 2000, 10000, 20000];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Row {
    pub points: usize,
    pub basis: f64,
    pub taylor: f64,
}

/// Rows are independent, so each runs on its own thread.
pub fn compute() -> CliResult<Vec<Row>> {
    let curve = example1_curve()?;
    std::thread::scope(|scope| {
        let handles: Vec<_> = POINT_COUNTS
            .iter()
            .map(|&m| {
                let curve = &curve;
                scope.spawn(move || -> CliResult<Row> {
                    Ok(Row {
                        points: m,
                        basis: example1_endpoint_deviation(curve, m, Method::Basis)?,
                        taylor: example1_endpoint_deviation(curve, m, Method::Taylor)?,
                    })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("table row panicked")).collect()
    })
}

pub fn write(out: &mut dyn Write, rows: &[Row], csv: bool) -> std::io::Result<()> {
    if csv {
        writeln!(out, "points,basis,taylor")?;
        for r in rows {
            writeln!(out, "{},{},{}", r.points, fmt_num(r.basis), fmt_num(r.taylor))?;
        }
    } else {
        writeln!(out, "{:>8}  {:>12}  {:>12}", "#points", "basis", "taylor")?;
        for r in rows {
            writeln!(out, "{:>8}  {:>12.3e}  {:>12.3e}", r.points, r.basis, r.taylor)?;
        }
    }
    Ok(())
}
