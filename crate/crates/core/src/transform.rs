//! Exact basis-transformation matrices.
//!
//! For a translated parameter, `Phi(t + h) = C_h Phi(t)`; for a linear
//! reparametrization of a polynomial space, `Phi(a + (b - a) t) = C Phi(t)`.
//! The matrices are assembled in closed form from the elementary blocks, so
//! no matrix exponential is ever computed.

use crate::basis::{bernstein_all, BasisDescriptor, Param, SurfaceBasisDescriptor};
use crate::error::{Error, Result};
use crate::smallmat::DenseMatrix;

/// Largest argument fed to the truncated Taylor series; larger steps are
/// split into `K = 2^k` pieces and recombined by repeated squaring.
pub const REDUCTION_THRESHOLD: f64 = 0.1;

/// A parameter step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StepSpec {
    /// `t -> t + h`
    Translate(f64),
    /// `t -> (1 - t) a + t b`, only for polynomial bases.
    Linear { a: f64, b: f64 },
}

impl StepSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            StepSpec::Translate(h) if !h.is_finite() => {
                Err(Error::Precondition(format!("step {h} is not finite")))
            }
            StepSpec::Linear { a, b } if !a.is_finite() || !b.is_finite() => {
                Err(Error::Precondition("linear step bounds must be finite".into()))
            }
            StepSpec::Linear { a, b } if a == b => Err(Error::Precondition(format!(
                "linear step needs a != b, got a = b = {a}"
            ))),
            _ => Ok(()),
        }
    }

    /// Parameter reached after applying the step once from `t`.
    pub fn advance(&self, t: f64) -> f64 {
        match *self {
            StepSpec::Translate(h) => t + h,
            StepSpec::Linear { a, b } => a + (b - a) * t,
        }
    }

    /// Parameter after `i` applications from `t0`, in closed form.
    pub fn param_at(&self, t0: f64, i: usize) -> f64 {
        match *self {
            StepSpec::Translate(h) => t0 + i as f64 * h,
            StepSpec::Linear { a, b } => {
                let r = b - a;
                if r == 1.0 {
                    t0 + i as f64 * a
                } else {
                    let ri = r.powi(i as i32);
                    a * (1.0 - ri) / (1.0 - r) + t0 * ri
                }
            }
        }
    }
}

impl std::fmt::Display for StepSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StepSpec::Translate(h) => write!(f, "translate({h})"),
            StepSpec::Linear { a, b } => write!(f, "linear({a}, {b})"),
        }
    }
}

const SIN_COEFFS: [f64; 8] = [
    1.0,
    -1.0 / 6.0,
    1.0 / 120.0,
    -1.0 / 5040.0,
    1.0 / 362880.0,
    -1.0 / 39916800.0,
    1.0 / 6227020800.0,
    -1.0 / 1307674368000.0,
];

const COS_COEFFS: [f64; 9] = [
    1.0,
    -1.0 / 2.0,
    1.0 / 24.0,
    -1.0 / 720.0,
    1.0 / 40320.0,
    -1.0 / 3628800.0,
    1.0 / 479001600.0,
    -1.0 / 87178291200.0,
    1.0 / 20922789888000.0,
];

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn check_reduced(h: f64) -> Result<()> {
    if !(h.abs() <= REDUCTION_THRESHOLD) {
        return Err(Error::Precondition(format!(
            "|h| = {} exceeds the reduction threshold {REDUCTION_THRESHOLD}",
            h.abs()
        )));
    }
    Ok(())
}

/// `(sin h, cos h)` from the series through `h^15` / `h^16`, Horner in `h^2`.
pub fn sin_cos_taylor(h: f64) -> Result<(f64, f64)> {
    check_reduced(h)?;
    let x = h * h;
    Ok((h * horner(&SIN_COEFFS, x), horner(&COS_COEFFS, x)))
}

/// `(sinh h, cosh h)` from the same series with all signs positive.
pub fn sinh_cosh_taylor(h: f64) -> Result<(f64, f64)> {
    check_reduced(h)?;
    let x = -h * h;
    // Flipping the sign of h^2 turns the alternating series into the hyperbolic one.
    Ok((h * horner(&SIN_COEFFS, x), horner(&COS_COEFFS, x)))
}

/// Smallest power of two `K` with `|x| / K <= threshold`.
fn reduction_factor(x: f64) -> u64 {
    let mut k = 1u64;
    while x.abs() / k as f64 > REDUCTION_THRESHOLD {
        k *= 2;
    }
    k
}

fn reduced_matrix(theta: f64, block: impl Fn(f64) -> DenseMatrix) -> DenseMatrix {
    assert!(theta.is_finite(), "step must be finite");
    let k = reduction_factor(theta);
    let base = block(theta / k as f64);
    base.pow(k).expect("2x2 block is square")
}

/// Rotation `[[cos, -sin], [sin, cos]]` for the effective step `theta = w h`.
pub fn trig_translation_matrix(theta: f64) -> DenseMatrix {
    reduced_matrix(theta, |x| {
        let (s, c) = sin_cos_taylor(x).expect("argument reduced");
        DenseMatrix::new(2, 2, vec![c, -s, s, c]).expect("finite")
    })
}

/// `[[cosh, sinh], [sinh, cosh]]` for the effective step `theta = w h`.
pub fn hyper_translation_matrix(theta: f64) -> DenseMatrix {
    reduced_matrix(theta, |x| {
        let (s, c) = sinh_cosh_taylor(x).expect("argument reduced");
        DenseMatrix::new(2, 2, vec![c, s, s, c]).expect("finite")
    })
}

/// Pascal's triangle up to row `n`, as floats.
pub fn binomials(n: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<u128>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = vec![1u128; i + 1];
        for j in 1..i {
            row[j] = rows[i - 1][j - 1] + rows[i - 1][j];
        }
        rows.push(row);
    }
    rows.into_iter()
        .map(|r| r.into_iter().map(|x| x as f64).collect())
        .collect()
}

fn powers(x: f64, n: usize) -> Vec<f64> {
    let mut p = Vec::with_capacity(n + 1);
    let mut acc = 1.0;
    for _ in 0..=n {
        p.push(acc);
        acc *= x;
    }
    p
}

/// Lower-triangular binomial matrix with `U_n(t + h) = M U_n(t)`.
pub fn poly_translation_matrix(n: usize, h: f64) -> DenseMatrix {
    power_linear_unchecked(n, 1.0, h)
}

/// `C_A` with `U_n(a0 t + a1) = C_A U_n(t)`.
pub fn power_linear_matrix(n: usize, a0: f64, a1: f64) -> Result<DenseMatrix> {
    if a0 == 0.0 || !a0.is_finite() || !a1.is_finite() {
        return Err(Error::Precondition(format!(
            "power-basis reparametrization needs finite a0 != 0, got a0 = {a0}, a1 = {a1}"
        )));
    }
    Ok(power_linear_unchecked(n, a0, a1))
}

fn power_linear_unchecked(n: usize, a0: f64, a1: f64) -> DenseMatrix {
    let binom = binomials(n);
    let p0 = powers(a0, n);
    let p1 = powers(a1, n);
    let mut m = DenseMatrix::zeros(n + 1, n + 1);
    for i in 0..=n {
        for j in 0..=i {
            m[(i, j)] = binom[i][j] * p0[j] * p1[i - j];
        }
    }
    m
}

/// `C_B` with `Phi_B((1 - t) a + t b) = C_B Phi_B(t)`, entries
/// `c_kl = sum_{i + j = k} B_{i,l}(b) B_{j,n-l}(a)`.
pub fn bernstein_linear_matrix(n: usize, a: f64, b: f64) -> Result<DenseMatrix> {
    StepSpec::Linear { a, b }.validate()?;
    let at_b: Vec<Vec<f64>> = (0..=n).map(|l| bernstein_all(l, b)).collect();
    let at_a: Vec<Vec<f64>> = (0..=n).map(|l| bernstein_all(l, a)).collect();
    let mut m = DenseMatrix::zeros(n + 1, n + 1);
    for l in 0..=n {
        let (bl, an) = (&at_b[l], &at_a[n - l]);
        for (i, &x) in bl.iter().enumerate() {
            for (j, &y) in an.iter().enumerate() {
                m[(i + j, l)] += x * y;
            }
        }
    }
    Ok(m)
}

/// `C_h` with `Phi(t + h) = C_h Phi(t)`.
pub fn translation_matrix(basis: &BasisDescriptor, h: f64) -> DenseMatrix {
    match basis {
        BasisDescriptor::Poly(n) => poly_translation_matrix(*n, h),
        BasisDescriptor::Trig(w) => trig_translation_matrix(w * h),
        BasisDescriptor::Hyper(w) => hyper_translation_matrix(w * h),
        BasisDescriptor::Bernstein(n) => {
            bernstein_linear_matrix(*n, h, 1.0 + h).expect("h != 1 + h for finite h")
        }
        BasisDescriptor::Union(a, b) => translation_matrix(a, h)
            .block_diag(&translation_matrix(b, h))
            .expect("translation blocks are square"),
        BasisDescriptor::Product(a, b) => translation_matrix(a, h).kron(&translation_matrix(b, h)),
    }
}

/// Matrix for `t -> (1 - t) a + t b` on a polynomial basis.
pub fn linear_matrix(basis: &BasisDescriptor, a: f64, b: f64) -> Result<DenseMatrix> {
    let step = StepSpec::Linear { a, b };
    step.validate()?;
    match basis {
        BasisDescriptor::Poly(n) => power_linear_matrix(*n, b - a, a),
        BasisDescriptor::Bernstein(n) => bernstein_linear_matrix(*n, a, b),
        other => Err(Error::UnsupportedStep {
            step: step.to_string(),
            basis: other.to_string(),
        }),
    }
}

/// Transformation matrix for any supported step.
pub fn step_matrix(basis: &BasisDescriptor, step: StepSpec) -> Result<DenseMatrix> {
    step.validate()?;
    match step {
        StepSpec::Translate(h) => Ok(translation_matrix(basis, h)),
        StepSpec::Linear { a, b } => linear_matrix(basis, a, b),
    }
}

/// Translation of a single surface parameter; the other parameter's factors get identities.
pub fn surface_translation_matrix(sb: &SurfaceBasisDescriptor, p: Param, h: f64) -> DenseMatrix {
    match sb {
        SurfaceBasisDescriptor::Factor(q, b) if *q == p => translation_matrix(b, h),
        SurfaceBasisDescriptor::Factor(_, b) => DenseMatrix::identity(b.dim()),
        SurfaceBasisDescriptor::Union(a, b) => surface_translation_matrix(a, p, h)
            .block_diag(&surface_translation_matrix(b, p, h))
            .expect("translation blocks are square"),
        SurfaceBasisDescriptor::Product(a, b) => {
            surface_translation_matrix(a, p, h).kron(&surface_translation_matrix(b, p, h))
        }
    }
}

/// `(C_u^{h1}, C_v^{h2})`.
pub fn surface_translation_matrices(
    sb: &SurfaceBasisDescriptor,
    h1: f64,
    h2: f64,
) -> (DenseMatrix, DenseMatrix) {
    (
        surface_translation_matrix(sb, Param::U, h1),
        surface_translation_matrix(sb, Param::V, h2),
    )
}
