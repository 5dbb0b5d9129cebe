//! Exit criteria for the whole workspace. Every criterion runs, prints one
//! PASS/FAIL line with its measured figures, and the process fails if any
//! criterion did.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use expoly::basis::Param;
use expoly::oracle::taylor_ode_step_matrix;
use expoly::smallmat::{max_abs_diff, norm_inf};
use expoly::transform::translation_matrix;
use expoly::{BasisDescriptor, CurveSpec, DenseMatrix, EvalRun, LiftedCurve, StepSpec};
use expoly_cli::examples::{self, Method, DEFAULT_SEED};
use expoly_cli::{bench, table2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn rel(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    a.max_abs_diff(b) / b.max_abs().max(1e-300)
}

// 1 ------------------------------------------------------------------------

fn table_basis_column() -> Verdict {
    let started = Instant::now();
    let curve = examples::example1_curve().unwrap();
    let devs: Vec<(usize, f64)> = table2::POINT_COUNTS
        .iter()
        .map(|&m| (m, examples::example1_endpoint_deviation(&curve, m, Method::Basis).unwrap()))
        .collect();
    let elapsed = started.elapsed();
    let worst = devs.iter().map(|d| d.1).fold(0.0, f64::max);
    let listing: Vec<String> = devs.iter().map(|(m, d)| format!("{m}:{d:.2e}")).collect();
    verdict(
        worst <= 1e-10 && within(elapsed, 1.0),
        format!("max {worst:.3e} <= 1e-10 [{}] in {elapsed:.2?}", listing.join(" ")),
    )
}

// 2 ------------------------------------------------------------------------

fn table_taylor_trend() -> Verdict {
    let started = Instant::now();
    let curve = examples::example1_curve().unwrap();
    let printed = [(10, 2.9e1), (100, 2.0e-5), (1000, 2.0e-11)];
    let devs: Vec<f64> = printed
        .iter()
        .map(|&(m, _)| examples::example1_endpoint_deviation(&curve, m, Method::Taylor).unwrap())
        .collect();
    let elapsed = started.elapsed();
    let magnitudes = devs
        .iter()
        .zip(&printed)
        .all(|(d, (_, p))| *d >= p / 10.0 && *d <= p * 10.0);
    let decreasing = devs.windows(2).all(|w| w[1] < w[0]);
    verdict(
        magnitudes && decreasing && within(elapsed, 1.0),
        format!(
            "m=10: {:.3e}, m=100: {:.3e}, m=1000: {:.3e} (decreasing: {decreasing}) in {elapsed:.2?}",
            devs[0], devs[1], devs[2]
        ),
    )
}

// 3 ------------------------------------------------------------------------

fn rotation(h: f64) -> DenseMatrix {
    DenseMatrix::from_rows(&[vec![h.cos(), -h.sin()], vec![h.sin(), h.cos()]]).unwrap()
}

fn taylor_convergence() -> Verdict {
    let started = Instant::now();
    let a = BasisDescriptor::trig(1.0).unwrap().derivative_matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = (f64::INFINITY, 0.0f64);
    for _ in 0..50 {
        let h: f64 = rng.gen_range(0.1..0.5);
        let e1 = taylor_ode_step_matrix(&a, h, 6).unwrap().max_abs_diff(&rotation(h));
        let e2 = taylor_ode_step_matrix(&a, h / 2.0, 6).unwrap().max_abs_diff(&rotation(h / 2.0));
        let ratio = e1 / e2;
        worst = (worst.0.min(ratio), worst.1.max(ratio));
    }
    let elapsed = started.elapsed();
    verdict(
        worst.0 >= 64.0 && worst.1 <= 256.0 && within(elapsed, 1.0),
        format!("ratio in [{:.2}, {:.2}] for 50 steps h in [0.1, 0.5), expected 128 within x2, in {elapsed:.2?}", worst.0, worst.1),
    )
}

// 4 ------------------------------------------------------------------------

fn bezier_oracle() -> Verdict {
    let started = Instant::now();
    let points = examples::example2_points(DEFAULT_SEED);
    let runs = examples::example2_runs(&points).unwrap();
    let elapsed = started.elapsed();
    let per_case: Vec<String> = examples::EX2_CASES
        .iter()
        .zip(&runs)
        .map(|((_, a, b), (dev, s))| {
            let size = s.iter().map(|p| norm_inf(&p.point)).fold(0.0, f64::max);
            format!("({a},{b}): {dev:.2e} to t={:.3}, relative {:.1e}", s.last().unwrap().t, dev / size)
        })
        .collect();
    let counts_ok = runs.iter().all(|(_, s)| s.len() == examples::EX2_STEPS + 1);
    let worst = runs.iter().map(|r| r.0).fold(0.0, f64::max);
    verdict(
        worst <= 1e-10 && counts_ok && within(elapsed, 1.0),
        format!("max {worst:.3e} <= 1e-10 [{}] in {elapsed:.2?}", per_case.join("; ")),
    )
}

// 5 ------------------------------------------------------------------------

fn helicoid_family() -> Verdict {
    let started = Instant::now();
    let surface = examples::helicoid().unwrap();
    let runs = examples::example4_runs(&surface).unwrap();
    let elapsed = started.elapsed();
    let worst = runs
        .iter()
        .flatten()
        .map(|s| max_abs_diff(&s.point, &examples::helicoid_exact(s.u, s.v)))
        .fold(0.0, f64::max);
    let shape_ok = runs.len() == 11 && runs.iter().all(|r| r.len() == examples::EX4_STEPS + 1);
    verdict(
        worst <= 1e-10 && shape_ok && within(elapsed, 1.0),
        format!("max {worst:.3e} <= 1e-10 over {} curves in {elapsed:.2?}", runs.len()),
    )
}

// 6 ------------------------------------------------------------------------

fn cyclide_closure() -> Verdict {
    let started = Instant::now();
    let surface = examples::cyclide().unwrap();
    let run = examples::example5_run(&surface).unwrap();
    let elapsed = started.elapsed();
    let first = &run[0];
    let last = run.last().unwrap();
    let dist = expoly::smallmat::euclidean_distance(&first.point, &last.point);
    verdict(
        dist <= 1e-10 && run.len() == 10_001 && within(elapsed, 1.0),
        format!("closure {dist:.3e} <= 1e-10 after {} products in {elapsed:.2?}", run.len() - 1),
    )
}

// 7 ------------------------------------------------------------------------

fn bezier_surface_schedule() -> Verdict {
    let started = Instant::now();
    let net = examples::example3_net(DEFAULT_SEED);
    let run = examples::example3_run(&net).unwrap();
    let elapsed = started.elapsed();
    let last = run.last().unwrap();
    let dev = expoly::smallmat::euclidean_distance(&last.point, &expoly::oracle::de_casteljau_surface(&net, 0.5, 0.5));
    let at_center = (last.u - 0.5).abs() < 1e-12 && (last.v - 0.5).abs() < 1e-12;
    verdict(
        dev <= 1e-10 && at_center && within(elapsed, 1.0),
        format!("S(0.5,0.5) deviation {dev:.3e} <= 1e-10 after {} steps in {elapsed:.2?}", run.len() - 1),
    )
}

// 8, 9 --------------------------------------------------------------------

fn random_leaf(rng: &mut ChaCha8Rng) -> BasisDescriptor {
    match rng.gen_range(0..4) {
        0 => BasisDescriptor::poly(rng.gen_range(0..5)),
        1 => BasisDescriptor::bernstein(rng.gen_range(0..5)),
        2 => BasisDescriptor::trig(rng.gen_range(0.2..2.5)).unwrap(),
        _ => BasisDescriptor::hyper(rng.gen_range(0.2..1.5)).unwrap(),
    }
}

fn random_tree(rng: &mut ChaCha8Rng, depth: usize) -> BasisDescriptor {
    if depth == 0 || rng.gen_bool(0.4) {
        return random_leaf(rng);
    }
    let (a, b) = (random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    if rng.gen_bool(0.5) {
        BasisDescriptor::union(a, b)
    } else {
        BasisDescriptor::product(a, b)
    }
}

fn random_descriptor(rng: &mut ChaCha8Rng) -> BasisDescriptor {
    loop {
        let b = random_tree(rng, 3);
        if b.dim() <= 16 {
            return b;
        }
    }
}

/// Linear independence judged on a sample grid over `[-1, 1]`.
fn is_independent(b: &BasisDescriptor) -> bool {
    let n = 4 * b.dim();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|k| b.eval(-1.0 + 2.0 * k as f64 / (n - 1).max(1) as f64).into_inner())
        .collect();
    let g = DenseMatrix::from_rows(&rows).unwrap();
    g.transpose().mul(&g).unwrap().condition_estimate() < 1e12
}

/// Exponential series summed until the terms fall below `1e-18` of the sum.
fn series_exp(a: &DenseMatrix, h: f64) -> DenseMatrix {
    let ha = a.scale(h);
    let mut term = DenseMatrix::identity(a.rows());
    let mut sum = term.clone();
    for k in 1..400 {
        term = term.mul(&ha).unwrap().scale(1.0 / k as f64);
        sum = sum.add(&term).unwrap();
        if k > 4 && term.norm_inf() < 1e-18 * sum.norm_inf() {
            break;
        }
    }
    sum
}

fn translation_properties() -> Verdict {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let triples = 300;
    let (mut moved, mut semi, mut comm, mut inv, mut expo) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..triples {
        let b = random_descriptor(&mut rng);
        let t: f64 = rng.gen_range(-1.0..1.0);
        let h: f64 = rng.gen_range(-1.0..1.0);
        let h2: f64 = rng.gen_range(-1.0..1.0);
        let c = translation_matrix(&b, h);
        let phi = b.eval(t + h);
        let shifted = c.mul_vec(&b.eval(t)).unwrap();
        moved = moved.max(max_abs_diff(&shifted, &phi) / norm_inf(&phi).max(1e-300));

        let c2 = translation_matrix(&b, h2);
        let sum = translation_matrix(&b, h + h2);
        semi = semi.max(rel(&c.mul(&c2).unwrap(), &sum));
        comm = comm.max(rel(&c2.mul(&c).unwrap(), &sum));
        inv = inv.max(c.mul(&translation_matrix(&b, -h)).unwrap().max_abs_diff(&DenseMatrix::identity(b.dim())));
        expo = expo.max(rel(&series_exp(&b.derivative_matrix(), h), &c));
    }
    let elapsed = started.elapsed();
    verdict(
        moved <= 1e-11 && semi <= 1e-11 && comm <= 1e-11 && inv <= 1e-11 && expo <= 1e-10 && within(elapsed, 5.0),
        format!(
            "{triples} triples: shift {moved:.2e}, semigroup {semi:.2e}, commute {comm:.2e}, inverse {inv:.2e}, exp {expo:.2e} in {elapsed:.2?}"
        ),
    )
}

fn five_point(f: impl Fn(f64) -> Vec<f64>, t: f64, h: f64) -> Vec<f64> {
    let (p1, m1, p2, m2) = (f(t + h), f(t - h), f(t + 2.0 * h), f(t - 2.0 * h));
    (0..p1.len())
        .map(|i| (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * h))
        .collect()
}

fn derivative_checks() -> Verdict {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut basis_err = 0.0f64;
    for _ in 0..100 {
        let b = random_descriptor(&mut rng);
        let t: f64 = rng.gen_range(-1.0..1.0);
        let exact = b.derivative_matrix().mul_vec(&b.eval(t)).unwrap();
        let fd = five_point(|s| b.eval(s).into_inner(), t, 1e-3);
        basis_err = basis_err.max(max_abs_diff(&exact, &fd));
    }

    let mut curve_err = 0.0f64;
    let mut curves = 0;
    while curves < 50 {
        let b = random_descriptor(&mut rng);
        if b.dim() > 12 || !is_independent(&b) {
            continue;
        }
        let d = rng.gen_range(1..=3.min(b.dim()));
        let pts: Vec<Vec<f64>> = (0..b.dim()).map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let curve = LiftedCurve::lift(&CurveSpec::new(b, pts).unwrap()).unwrap();
        if curve.lifted_matrix().condition_estimate() > 100.0 {
            continue;
        }
        curves += 1;
        let h = 1e-3;
        let s = curve.run(&EvalRun::new(-0.2, StepSpec::Translate(h), 40)).unwrap();
        for i in [2usize, 20, 38] {
            let fd: Vec<f64> = (0..d)
                .map(|k| (8.0 * (s[i + 1].point[k] - s[i - 1].point[k]) - (s[i + 2].point[k] - s[i - 2].point[k])) / (12.0 * h))
                .collect();
            let exact = &curve.derivatives_at(&s[i].lifted, 1).unwrap()[0];
            curve_err = curve_err.max(max_abs_diff(exact, &fd));
        }
    }
    let elapsed = started.elapsed();
    verdict(
        basis_err <= 1e-7 && curve_err <= 1e-7 && within(elapsed, 2.0),
        format!("basis A.Phi {basis_err:.2e}, curve stream {curve_err:.2e} (<= 1e-7, 100 bases, {curves} curves) in {elapsed:.2?}"),
    )
}

// 10 -----------------------------------------------------------------------

const NOISE: f64 = 1e-9;

fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / s).collect()
}

fn perturb(x: &[f64], rng: &mut ChaCha8Rng) -> Vec<f64> {
    x.iter().zip(random_unit(x.len(), rng)).map(|(a, u)| a + NOISE * u).collect()
}

/// Worst projected deviation over `NOISE` and whether every point stays under
/// `|M^i|_inf NOISE`.
struct Propagation {
    worst_ratio: f64,
    under_bound: bool,
}

fn propagation<'a>(
    pairs: impl Iterator<Item = (&'a [f64], &'a [f64])>,
    matrices: impl Iterator<Item = &'a DenseMatrix>,
) -> Propagation {
    let mut power: Option<DenseMatrix> = None;
    let mut out = Propagation { worst_ratio: 0.0, under_bound: true };
    for ((a, b), m) in pairs.zip(std::iter::once(None).chain(matrices.map(Some))) {
        if let Some(m) = m {
            power = Some(match power {
                None => m.clone(),
                Some(p) => m.mul(&p).unwrap(),
            });
        }
        let bound = power.as_ref().map_or(1.0, |p| p.norm_inf()) * NOISE;
        let dev = norm_inf(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>());
        out.worst_ratio = out.worst_ratio.max(dev / NOISE);
        out.under_bound &= dev <= bound;
    }
    out
}

fn noise_propagation() -> Verdict {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut parts = Vec::new();
    let mut pass = true;

    let curve = examples::example1_curve().unwrap();
    let m = 2000;
    let h = examples::EX1_END / m as f64;
    let start = examples::example1_start(&curve);
    let base = curve.run(&EvalRun::new(0.0, StepSpec::Translate(h), m).with_start(start.clone())).unwrap();
    let pert = curve
        .run(&EvalRun::new(0.0, StepSpec::Translate(h), m).with_start(perturb(&start, &mut rng).into()))
        .unwrap();
    let step = curve.iteration_matrix(StepSpec::Translate(h)).unwrap();
    let p = propagation(
        base.iter().zip(&pert).map(|(a, b)| (a.point.as_slice(), b.point.as_slice())),
        std::iter::repeat_n(&step, m),
    );
    pass &= p.worst_ratio <= 100.0 && p.under_bound;
    parts.push(format!("ex1 {:.1}x (bound {})", p.worst_ratio, p.under_bound));

    let helicoid = examples::helicoid().unwrap();
    let step = helicoid.step_matrix(0.0, examples::EX4_H).unwrap();
    let mut worst = 0.0f64;
    let mut bounded = true;
    for u in examples::helicoid_u_values() {
        let start = [2.0 + u, 0.0, 0.0, 1.0, u, 0.0];
        let noisy = perturb(&start, &mut rng);
        let a = helicoid.run_iso(u, 0.0, Some(&start), Param::V, examples::EX4_H, examples::EX4_STEPS).unwrap();
        let b = helicoid.run_iso(u, 0.0, Some(&noisy), Param::V, examples::EX4_H, examples::EX4_STEPS).unwrap();
        let p = propagation(
            a.iter().zip(&b).map(|(x, y)| (x.point.as_slice(), y.point.as_slice())),
            std::iter::repeat_n(&step, examples::EX4_STEPS),
        );
        worst = worst.max(p.worst_ratio);
        bounded &= p.under_bound;
    }
    pass &= worst <= 100.0 && bounded;
    parts.push(format!("ex4 {worst:.1}x (bound {bounded})"));

    let cyclide = examples::cyclide().unwrap();
    let schedule = examples::example5_schedule();
    let start = cyclide.point_at(0.0, PI).into_inner();
    let noisy = perturb(&start, &mut rng);
    let a = cyclide.run_schedule(0.0, PI, Some(&start), &schedule).unwrap();
    let b = cyclide.run_schedule(0.0, PI, Some(&noisy), &schedule).unwrap();
    let up = cyclide.step_matrix(schedule[0].du, schedule[0].dv).unwrap();
    let down = cyclide.step_matrix(schedule[1].du, schedule[1].dv).unwrap();
    let steps = schedule
        .iter()
        .enumerate()
        .flat_map(|(k, s)| std::iter::repeat_n(if k % 2 == 0 { &up } else { &down }, s.count));
    let lifted = propagation(a.iter().zip(&b).map(|(x, y)| (x.lifted.as_slice(), y.lifted.as_slice())), steps.clone());
    let projected = propagation(a.iter().zip(&b).map(|(x, y)| (x.point.as_slice(), y.point.as_slice())), steps);
    pass &= projected.worst_ratio <= 100.0 && projected.under_bound && lifted.under_bound;
    parts.push(format!(
        "ex5 {:.1}x projected, {:.1}x lifted (bound {})",
        projected.worst_ratio,
        lifted.worst_ratio,
        projected.under_bound && lifted.under_bound
    ));

    let elapsed = started.elapsed();
    verdict(
        pass && within(elapsed, 2.0),
        format!("worst deviation / 1e-9 <= 100: {} in {elapsed:.2?}", parts.join(", ")),
    )
}

// 11 -----------------------------------------------------------------------

fn benchmark() -> Verdict {
    let r = bench::bezier(DEFAULT_SEED, bench::DEFAULT_POINTS, 5).unwrap();
    verdict(
        r.ratio > 1.0,
        format!(
            "dynamic {:.3e} pts/s vs de Casteljau {:.3e} pts/s, ratio {:.2} (construction {:.3} ms)",
            r.dynamic_points_per_s, r.oracle_points_per_s, r.ratio, r.construction_ms
        ),
    )
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("table basis column", table_basis_column),
        ("table taylor trend", table_taylor_trend),
        ("taylor convergence order", taylor_convergence),
        ("bezier vs de casteljau", bezier_oracle),
        ("helicoid family", helicoid_family),
        ("cyclide closure", cyclide_closure),
        ("bezier surface schedule", bezier_surface_schedule),
        ("translation properties", translation_properties),
        ("derivative checks", derivative_checks),
        ("noise propagation", noise_propagation),
        ("benchmark", benchmark),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        let tag = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name}: {}", k + 1, v.detail);
        if !v.pass {
            failed.push(k + 1);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
