//! Built-in reproductions of the five worked examples.

use std::f64::consts::PI;
use std::time::Instant;

use expoly::basis::Param;
use expoly::oracle::{de_casteljau, de_casteljau_surface, taylor_ode_step_matrix};
use expoly::smallmat::euclidean_distance;
use expoly::{
    BasisDescriptor, CurveSpec, DenseMatrix, DenseVector, EvalRun, LiftedCurve, LiftedSurface,
    Segment, StepSpec, SurfaceBasisDescriptor, SurfaceSample,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CliResult;
use crate::output::{ErrorReport, Params, PointRecord};

/// Seed for the randomly generated control nets of Examples 2 and 3.
pub const DEFAULT_SEED: u64 = 2018;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Basis,
    Taylor,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Basis => "basis",
            Method::Taylor => "taylor",
        }
    }
}

/// Order of the Taylor comparator.
pub const TAYLOR_ORDER: usize = 6;

/// Stream, report and example-specific figures from one run.
pub struct Outcome {
    pub records: Vec<PointRecord>,
    pub report: ErrorReport,
    pub extra: Vec<(String, f64)>,
}

fn ms_since(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

// Example 1 ----------------------------------------------------------------

pub const EX1_END: f64 = 8.0 * PI;

/// `(1, c, s, tc, ts, t^2 c, t^2 s, t^3 c, t^3 s)` with `c = cos t`, `s = sin t`.
pub fn example1_basis() -> BasisDescriptor {
    BasisDescriptor::union(
        BasisDescriptor::poly(0),
        BasisDescriptor::product(BasisDescriptor::poly(3), BasisDescriptor::trig(1.0).expect("unit frequency")),
    )
}

pub fn example1_points() -> Vec<Vec<f64>> {
    vec![
        vec![-1.494, 0.52],
        vec![1.494, -0.52],
        vec![0.52, 1.494],
        vec![-0.12, -1.494],
        vec![1.494, -0.12],
        vec![0.003, 0.06],
        vec![-0.06, 0.003],
        vec![0.0, -0.001],
        vec![0.001, 0.0],
    ]
}

pub fn example1_curve() -> CliResult<LiftedCurve> {
    let spec = CurveSpec::new(example1_basis(), example1_points())?;
    Ok(LiftedCurve::lift(&spec)?)
}

/// `X(0) = X_0 + X_1` on the lifted curve.
pub fn example1_start(curve: &LiftedCurve) -> DenseVector {
    let m = curve.lifted_matrix();
    (0..m.rows()).map(|i| m[(i, 0)] + m[(i, 1)]).collect::<Vec<_>>().into()
}

/// Direct evaluation of the planar curve.
pub fn example1_exact(theta: f64) -> Vec<f64> {
    let phi = example1_basis().eval(theta);
    let pts = example1_points();
    (0..2).map(|k| pts.iter().zip(phi.iter()).map(|(p, f)| p[k] * f).sum()).collect()
}

/// Lifted points at `8 pi i / m`, by basis transformation or order-6 Taylor steps.
pub fn example1_run(curve: &LiftedCurve, m: usize, method: Method) -> CliResult<Vec<(f64, Vec<f64>)>> {
    let h = EX1_END / m as f64;
    let start = example1_start(curve);
    let step = match method {
        Method::Basis => curve.iteration_matrix(StepSpec::Translate(h))?,
        Method::Taylor => taylor_ode_step_matrix(curve.derivative_matrix(), h, TAYLOR_ORDER)?,
    };
    let mut x = start.into_inner();
    let mut scratch = vec![0.0; x.len()];
    let mut out = Vec::with_capacity(m + 1);
    out.push((0.0, x.clone()));
    for i in 1..=m {
        step.mul_vec_into(&x, &mut scratch);
        std::mem::swap(&mut x, &mut scratch);
        out.push((i as f64 * h, x.clone()));
    }
    Ok(out)
}

/// Euclidean distance from the last point of an `m`-step run to the exact endpoint.
pub fn example1_endpoint_deviation(curve: &LiftedCurve, m: usize, method: Method) -> CliResult<f64> {
    let run = example1_run(curve, m, method)?;
    let last = &run.last().expect("at least the start point").1;
    Ok(euclidean_distance(&last[..2], &example1_exact(EX1_END)))
}

pub fn example1(m: usize, method: Method, lifted: bool) -> CliResult<Outcome> {
    let started = Instant::now();
    let curve = example1_curve()?;
    let run = example1_run(&curve, m, method)?;
    let runtime_ms = ms_since(started);
    let mut max_dev = 0.0f64;
    let records: Vec<PointRecord> = run
        .iter()
        .enumerate()
        .map(|(i, (t, x))| {
            max_dev = max_dev.max(euclidean_distance(&x[..2], &example1_exact(*t)));
            PointRecord {
                i,
                params: Params::Curve { t: *t },
                point: x[..2].to_vec(),
                lifted: lifted.then(|| x.clone()),
            }
        })
        .collect();
    let end = euclidean_distance(&run[m].1[..2], &example1_exact(EX1_END));
    Ok(Outcome {
        report: ErrorReport {
            max_deviation: max_dev,
            runtime_ms,
            points: records.len(),
            method: method.name().into(),
        },
        records,
        extra: vec![("endpoint_deviation".into(), end)],
    })
}

// Example 2 ----------------------------------------------------------------

/// `(t0, a, b)` for the four step policies.
pub const EX2_CASES: [(f64, f64, f64); 4] = [
    (0.0, 0.01, 1.01),
    (0.0, 0.01, 1.005),
    (0.0, 0.01, 1.015),
    (1.0, -0.005, 0.99),
];

pub const EX2_STEPS: usize = 200;

/// Degree-8 planar control points, uniform in the unit square.
pub fn example2_points(seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..9).map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()]).collect()
}

pub fn example2_curve(points: &[Vec<f64>]) -> CliResult<LiftedCurve> {
    let spec = CurveSpec::new(BasisDescriptor::bernstein(8), points.to_vec())?;
    Ok(LiftedCurve::lift(&spec)?)
}

/// Max deviation from de Casteljau for each case, plus the emitted samples.
pub fn example2_runs(points: &[Vec<f64>]) -> CliResult<Vec<(f64, Vec<expoly::CurveSample>)>> {
    let curve = example2_curve(points)?;
    EX2_CASES
        .iter()
        .map(|&(t0, a, b)| {
            let samples = curve.run(&EvalRun::new(t0, StepSpec::Linear { a, b }, EX2_STEPS))?;
            let dev = samples
                .iter()
                .map(|s| euclidean_distance(&s.point, &de_casteljau(points, s.t)))
                .fold(0.0, f64::max);
            Ok((dev, samples))
        })
        .collect()
}

/// The four runs are emitted back to back with a running index.
pub fn example2(seed: u64, lifted: bool) -> CliResult<Outcome> {
    let points = example2_points(seed);
    let started = Instant::now();
    let runs = example2_runs(&points)?;
    let runtime_ms = ms_since(started);
    let mut records = Vec::new();
    for (_, samples) in &runs {
        for s in samples {
            let mut r = PointRecord::from_curve(s, lifted);
            r.i = records.len();
            records.push(r);
        }
    }
    let names = ["a", "b", "c", "d"];
    Ok(Outcome {
        report: ErrorReport {
            max_deviation: runs.iter().map(|r| r.0).fold(0.0, f64::max),
            runtime_ms,
            points: records.len(),
            method: "basis".into(),
        },
        records,
        extra: runs
            .iter()
            .zip(names)
            .map(|((d, _), n)| (format!("deviation_{n}"), *d))
            .collect(),
    })
}

// Example 3 ----------------------------------------------------------------

pub const EX3_H: f64 = 1.0 / 80.0;

/// Jittered 6 x 8 grid in the unit cube with random heights, scaled so `|P_00 - P_57| = 1`.
pub fn example3_net(seed: u64) -> Vec<Vec<Vec<f64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let net: Vec<Vec<Vec<f64>>> = (0..6)
        .map(|i| {
            (0..8)
                .map(|j| vec![0.9 * i as f64 / 5.0 + 0.1 * rng.gen::<f64>(), 0.9 * j as f64 / 7.0 + 0.1 * rng.gen::<f64>(), rng.gen::<f64>()])
                .collect()
        })
        .collect();
    let scale = euclidean_distance(&net[0][0], &net[5][7]);
    net.into_iter()
        .map(|row| row.into_iter().map(|p| p.into_iter().map(|x| x / scale).collect()).collect())
        .collect()
}

pub fn example3_surface(net: &[Vec<Vec<f64>>]) -> CliResult<LiftedSurface> {
    let basis = SurfaceBasisDescriptor::tensor(BasisDescriptor::bernstein(5), BasisDescriptor::bernstein(7));
    let columns: Vec<Vec<f64>> = net.iter().flatten().cloned().collect();
    let coeffs = DenseMatrix::from_columns(&columns)?;
    Ok(LiftedSurface::lift(&coeffs, basis, false)?)
}

/// 33 iso-curve pieces cycling `+u, +v, -u, -v` with `m_j = 80 - 5 floor((j-1)/2)`.
pub fn example3_schedule(h: f64) -> Vec<Segment> {
    (0..33usize)
        .map(|j| {
            let m = if j == 0 { 80 } else { 80 - 5 * ((j - 1) / 2) };
            let (du, dv) = match j % 4 {
                0 => (h, 0.0),
                1 => (0.0, h),
                2 => (-h, 0.0),
                _ => (0.0, -h),
            };
            Segment::new(du, dv, m)
        })
        .collect()
}

pub fn example3_run(net: &[Vec<Vec<f64>>]) -> CliResult<Vec<SurfaceSample>> {
    let surface = example3_surface(net)?;
    let start: Vec<f64> = surface.lifted_matrix().column(0);
    Ok(surface.run_schedule(0.0, 0.0, Some(&start), &example3_schedule(EX3_H))?)
}

pub fn example3(seed: u64, lifted: bool) -> CliResult<Outcome> {
    let net = example3_net(seed);
    let started = Instant::now();
    let run = example3_run(&net)?;
    let runtime_ms = ms_since(started);
    let max_dev = run
        .iter()
        .map(|s| euclidean_distance(&s.point, &de_casteljau_surface(&net, s.u, s.v)))
        .fold(0.0, f64::max);
    let last = run.last().expect("non-empty run");
    let center = euclidean_distance(&last.point, &de_casteljau_surface(&net, 0.5, 0.5));
    Ok(Outcome {
        records: run.iter().map(|s| PointRecord::from_surface(s, lifted)).collect(),
        report: ErrorReport {
            max_deviation: max_dev,
            runtime_ms,
            points: run.len(),
            method: "basis".into(),
        },
        extra: vec![
            ("final_u".into(), last.u),
            ("final_v".into(), last.v),
            ("center_deviation".into(), center),
        ],
    })
}

// Example 4 ----------------------------------------------------------------

pub const EX4_STEPS: usize = 200;
pub const EX4_H: f64 = 4.0 * PI / 200.0;

/// Basis `(1, v, cos v, sin v, u cos v, u sin v)` with the printed lifting.
pub fn helicoid() -> CliResult<LiftedSurface> {
    use SurfaceBasisDescriptor as S;
    let basis = S::union(
        S::v(BasisDescriptor::poly(1)),
        S::product(
            S::u(BasisDescriptor::poly(1)),
            S::v(BasisDescriptor::trig(1.0).expect("unit frequency")),
        ),
    );
    let m_x = DenseMatrix::from_rows(&[
        vec![0., 0., 2., 0., 1., 0.],
        vec![0., 0., 0., 2., 0., 1.],
        vec![0., 1., 0., 0., 0., 0.],
        vec![1., 0., 0., 0., 0., 0.],
        vec![0., 0., 0., 0., 1., 0.],
        vec![0., 0., 0., 0., 0., 1.],
    ])?;
    Ok(LiftedSurface::from_lifted(basis, m_x, 3, false)?)
}

pub fn helicoid_exact(u: f64, v: f64) -> [f64; 3] {
    [(2.0 + u) * v.cos(), (2.0 + u) * v.sin(), v]
}

pub fn helicoid_u_values() -> Vec<f64> {
    (0..=10).map(|k| 0.2 * k as f64).collect()
}

/// One `v`-curve per `u`, each starting from `(2+u, 0, 0, 1, u, 0)`.
pub fn example4_runs(surface: &LiftedSurface) -> CliResult<Vec<Vec<SurfaceSample>>> {
    helicoid_u_values()
        .into_iter()
        .map(|u| {
            let start = [2.0 + u, 0.0, 0.0, 1.0, u, 0.0];
            Ok(surface.run_iso(u, 0.0, Some(&start), Param::V, EX4_H, EX4_STEPS)?)
        })
        .collect()
}

pub fn example4(lifted: bool) -> CliResult<Outcome> {
    let started = Instant::now();
    let surface = helicoid()?;
    let runs = example4_runs(&surface)?;
    let runtime_ms = ms_since(started);
    let mut records = Vec::new();
    let mut max_dev = 0.0f64;
    for s in runs.iter().flatten() {
        max_dev = max_dev.max(euclidean_distance(&s.point, &helicoid_exact(s.u, s.v)));
        let mut r = PointRecord::from_surface(s, lifted);
        r.i = records.len();
        records.push(r);
    }
    Ok(Outcome {
        report: ErrorReport {
            max_deviation: max_dev,
            runtime_ms,
            points: records.len(),
            method: "basis".into(),
        },
        records,
        extra: vec![("curves".into(), runs.len() as f64)],
    })
}

// Example 5 ----------------------------------------------------------------

pub const CYCLIDE_A: f64 = 6.0;
pub const CYCLIDE_B: f64 = 5.656854249492381; // 4 sqrt 2
pub const CYCLIDE_C: f64 = 2.0;
pub const CYCLIDE_MU: f64 = 3.0;
pub const EX5_PIECES: usize = 100;
pub const EX5_STEPS: usize = 100;

/// Homogeneous coefficients over `(1, sin u, cos u) x (1, sin v, cos v)`.
pub fn cyclide_coefficients() -> DenseMatrix {
    let (a, b, c, mu) = (CYCLIDE_A, CYCLIDE_B, CYCLIDE_C, CYCLIDE_MU);
    DenseMatrix::from_rows(&[
        vec![mu * c, 0., 0., 0., 0., 0., b * b, 0., -mu * a],
        vec![0., 0., 0., a * b, 0., -mu * b, 0., 0., 0.],
        vec![0., -mu * b, 0., 0., 0., 0., 0., b * c, 0.],
        vec![a, 0., 0., 0., 0., 0., 0., 0., -c],
    ])
    .expect("4 x 9 rows")
}

/// Lifted in the printed column order, then permuted to the
/// `(1, cos, sin) x (1, cos, sin)` layout used by the trig leaf.
pub fn cyclide() -> CliResult<LiftedSurface> {
    let theta = BasisDescriptor::union(BasisDescriptor::poly(0), BasisDescriptor::trig(1.0)?);
    let basis = SurfaceBasisDescriptor::tensor(theta.clone(), theta);
    let swap = [0, 2, 1];
    let perm: Vec<usize> = (0..9).map(|j| 3 * swap[j / 3] + swap[j % 3]).collect();
    let m_x = expoly::lift::lift_matrix(&cyclide_coefficients())?;
    Ok(LiftedSurface::from_lifted(basis, m_x.permute_columns(&perm)?, 4, true)?)
}

pub fn cyclide_exact(u: f64, v: f64) -> [f64; 3] {
    let (a, b, c, mu) = (CYCLIDE_A, CYCLIDE_B, CYCLIDE_C, CYCLIDE_MU);
    let w = a - c * u.cos() * v.cos();
    [
        (mu * (c - a * u.cos() * v.cos()) + b * b * u.cos()) / w,
        b * u.sin() * (a - mu * v.cos()) / w,
        b * v.sin() * (c * u.cos() - mu) / w,
    ]
}

pub fn example5_schedule() -> Vec<Segment> {
    let (h1, h2) = (0.18 * PI / 100.0, PI / 100.0);
    (0..EX5_PIECES)
        .map(|k| Segment::new(h1, if k % 2 == 0 { h2 } else { -h2 }, EX5_STEPS))
        .collect()
}

pub fn example5_run(surface: &LiftedSurface) -> CliResult<Vec<SurfaceSample>> {
    Ok(surface.run_schedule(0.0, PI, None, &example5_schedule())?)
}

pub fn example5(lifted: bool) -> CliResult<Outcome> {
    let started = Instant::now();
    let surface = cyclide()?;
    let run = example5_run(&surface)?;
    let runtime_ms = ms_since(started);
    let max_dev = run
        .iter()
        .map(|s| euclidean_distance(&s.point, &cyclide_exact(s.u, s.v)))
        .fold(0.0, f64::max);
    let closure = euclidean_distance(&run[0].point, &run.last().expect("non-empty").point);
    Ok(Outcome {
        records: run.iter().map(|s| PointRecord::from_surface(s, lifted)).collect(),
        report: ErrorReport {
            max_deviation: max_dev,
            runtime_ms,
            points: run.len(),
            method: "basis".into(),
        },
        extra: vec![("closure_distance".into(), closure)],
    })
}
