//! Throughput of dynamic evaluation against a per-point reference evaluator.

use std::hint::black_box;
use std::time::Instant;

use expoly::oracle::{de_casteljau_in_place, direct_eval, direct_eval_surface};
use expoly::{BasisDescriptor, DenseMatrix, LiftedCurve, StepSpec};
use serde::Serialize;

use crate::error::CliResult;
use crate::examples::{example2_curve, example2_points};
use crate::scene::Job;

pub const DEFAULT_POINTS: usize = 100_000;

#[derive(Clone, Debug, Serialize)]
pub struct BenchReport {
    pub workload: String,
    pub oracle: String,
    pub points: usize,
    pub repetitions: usize,
    pub construction_ms: f64,
    pub dynamic_ms: f64,
    pub oracle_ms: f64,
    pub dynamic_points_per_s: f64,
    pub oracle_points_per_s: f64,
    pub ratio: f64,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Median wall time of `reps` calls, in milliseconds.
fn time_median(reps: usize, mut f: impl FnMut()) -> f64 {
    median(
        (0..reps)
            .map(|_| {
                let t = Instant::now();
                f();
                t.elapsed().as_secs_f64() * 1e3
            })
            .collect(),
    )
}

/// Applies `m` to `x` `count` times, copying the first `d` coordinates of each
/// point into `out`.
fn iterate(m: &DenseMatrix, x0: &[f64], d: usize, count: usize, out: &mut [f64]) {
    let mut x = x0.to_vec();
    let mut y = vec![0.0; x.len()];
    out[..d].copy_from_slice(&x[..d]);
    for i in 1..count {
        m.mul_vec_into(&x, &mut y);
        std::mem::swap(&mut x, &mut y);
        out[i * d..(i + 1) * d].copy_from_slice(&x[..d]);
    }
}

fn report(
    workload: String,
    oracle: &str,
    points: usize,
    repetitions: usize,
    construction_ms: f64,
    dynamic_ms: f64,
    oracle_ms: f64,
) -> BenchReport {
    let pps = |ms: f64| points as f64 / (ms.max(1e-9) * 1e-3);
    BenchReport {
        workload,
        oracle: oracle.into(),
        points,
        repetitions,
        construction_ms,
        dynamic_ms,
        oracle_ms,
        dynamic_points_per_s: pps(dynamic_ms),
        oracle_points_per_s: pps(oracle_ms),
        ratio: oracle_ms / dynamic_ms.max(1e-9),
    }
}

/// Degree-8 planar Bezier curve sampled at `points` uniform parameters in `[0, 1]`.
pub fn bezier(seed: u64, points: usize, repetitions: usize) -> CliResult<BenchReport> {
    let ctrl = example2_points(seed);
    let points = points.max(2);
    let h = 1.0 / (points - 1) as f64;
    let reps = repetitions.max(1);

    let mut built = None;
    let construction_ms = time_median(reps, || {
        let curve = example2_curve(&ctrl).expect("seeded Bezier curve lifts");
        let m = curve.iteration_matrix(StepSpec::Translate(h)).expect("translation step");
        built = Some((curve, m));
    });
    let (curve, m) = built.expect("at least one repetition");
    let start = curve.point_at(0.0).into_inner();

    let mut out = vec![0.0; 2 * points];
    let dynamic_ms = time_median(reps, || {
        iterate(&m, &start, 2, points, &mut out);
        black_box(&out);
    });

    let flat: Vec<f64> = ctrl.concat();
    let mut work = flat.clone();
    let oracle_ms = time_median(reps, || {
        for i in 0..points {
            work.copy_from_slice(&flat);
            de_casteljau_in_place(&mut work, 2, i as f64 * h, &mut out[2 * i..2 * i + 2]);
        }
        black_box(&out);
    });

    Ok(report(
        "bezier degree 8".into(),
        "de_casteljau",
        points,
        reps,
        construction_ms,
        dynamic_ms,
        oracle_ms,
    ))
}

fn is_bernstein(b: &BasisDescriptor) -> bool {
    matches!(b, BasisDescriptor::Bernstein(_))
}

fn curve_coefficients(curve: &LiftedCurve) -> DenseMatrix {
    curve.lifted_matrix().select_rows(0..curve.geometric_dim())
}

/// Times a scene's run with its step policy; `points` overrides the run length.
pub fn scene(job: &Job, points: Option<usize>, repetitions: usize) -> CliResult<BenchReport> {
    let reps = repetitions.max(1);
    match job {
        Job::Curve(c) => {
            let count = points.map_or(c.run.count, |p| p.max(1) - 1);
            let step = c.run.step;
            let mut m = None;
            let construction_ms = time_median(reps, || m = Some(c.curve.iteration_matrix(step)));
            let m = m.expect("at least one repetition")?;
            let start = match &c.run.start {
                Some(s) => s.clone().into_inner(),
                None => c.curve.point_at(c.run.t0).into_inner(),
            };
            let d = c.curve.geometric_dim();
            let n = count + 1;
            let mut out = vec![0.0; d * n];
            let dynamic_ms = time_median(reps, || {
                iterate(&m, &start, d, n, &mut out);
                black_box(&out);
            });
            let params: Vec<f64> = (0..n).map(|i| step.param_at(c.run.t0, i)).collect();
            let basis = c.curve.basis();
            let coeffs = curve_coefficients(&c.curve);
            let (oracle, oracle_ms) = if is_bernstein(basis) {
                let flat: Vec<f64> = (0..coeffs.cols()).flat_map(|j| coeffs.column(j)).collect();
                let mut work = flat.clone();
                let ms = time_median(reps, || {
                    for (i, &t) in params.iter().enumerate() {
                        work.copy_from_slice(&flat);
                        de_casteljau_in_place(&mut work, d, t, &mut out[i * d..(i + 1) * d]);
                    }
                    black_box(&out);
                });
                ("de_casteljau", ms)
            } else {
                let ms = time_median(reps, || {
                    for &t in &params {
                        black_box(direct_eval(&coeffs, basis, t).expect("dimensions agree"));
                    }
                });
                ("direct_eval", ms)
            };
            Ok(report(format!("curve {basis}"), oracle, n, reps, construction_ms, dynamic_ms, oracle_ms))
        }
        Job::Surface(s) => {
            let seg = s.segments.first().copied().unwrap_or(expoly::Segment::new(0.0, 0.0, 0));
            let count = points.map_or(seg.count, |p| p.max(1) - 1);
            let mut m = None;
            let construction_ms = time_median(reps, || m = Some(s.surface.step_matrix(seg.du, seg.dv)));
            let m = m.expect("at least one repetition")?;
            let [u0, v0] = s.start;
            let start = match &s.start_point {
                Some(x) => x.clone(),
                None => s.surface.point_at(u0, v0).into_inner(),
            };
            let d = s.surface.geometric_dim();
            let n = count + 1;
            let mut out = vec![0.0; d * n];
            let dynamic_ms = time_median(reps, || {
                iterate(&m, &start, d, n, &mut out);
                black_box(&out);
            });
            let coeffs = s.surface.lifted_matrix().select_rows(0..d);
            let basis = s.surface.basis();
            let oracle_ms = time_median(reps, || {
                for i in 0..n {
                    let (u, v) = (u0 + i as f64 * seg.du, v0 + i as f64 * seg.dv);
                    black_box(direct_eval_surface(&coeffs, basis, u, v).expect("dimensions agree"));
                }
            });
            Ok(report(format!("surface {basis}"), "direct_eval", n, reps, construction_ms, dynamic_ms, oracle_ms))
        }
    }
}
