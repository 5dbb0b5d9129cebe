#![allow(dead_code)]

use expoly::basis::SurfaceBasisDescriptor;
use expoly::{BasisDescriptor, DenseMatrix};
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = BasisDescriptor> {
    prop_oneof![
        (0usize..5).prop_map(BasisDescriptor::Poly),
        (0usize..5).prop_map(BasisDescriptor::Bernstein),
        (0.2f64..2.5).prop_map(BasisDescriptor::Trig),
        (0.2f64..1.5).prop_map(BasisDescriptor::Hyper),
    ]
}

/// Random descriptor trees of dimension at most 16.
pub fn descriptor() -> impl Strategy<Value = BasisDescriptor> {
    leaf()
        .prop_recursive(3, 16, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| BasisDescriptor::union(a, b)),
                (inner.clone(), inner).prop_map(|(a, b)| BasisDescriptor::product(a, b)),
            ]
        })
        .prop_filter("dim <= 16", |b| b.dim() <= 16)
}

/// Whether the basis functions are linearly independent, judged by sampling
/// them on a grid over `[-1, 1]`.
pub fn is_independent(b: &BasisDescriptor) -> bool {
    let n = b.dim();
    let samples = 4 * n;
    let rows: Vec<Vec<f64>> = (0..samples)
        .map(|k| b.eval(-1.0 + 2.0 * k as f64 / (samples - 1).max(1) as f64).into_inner())
        .collect();
    let g = DenseMatrix::from_rows(&rows).unwrap();
    let gram = g.transpose().mul(&g).unwrap();
    gram.condition_estimate() < 1e12
}

/// Random descriptors whose functions are linearly independent.
pub fn proper_descriptor(max_dim: usize) -> impl Strategy<Value = BasisDescriptor> {
    descriptor().prop_filter("independent", move |b| b.dim() <= max_dim && is_independent(b))
}

/// Tensor-product surface bases of dimension at most 16.
pub fn surface_descriptor() -> impl Strategy<Value = SurfaceBasisDescriptor> {
    (proper_descriptor(16), proper_descriptor(16))
        .prop_filter("dim <= 16", |(u, v)| u.dim() * v.dim() <= 16)
        .prop_map(|(u, v)| SurfaceBasisDescriptor::tensor(u, v))
}

/// Dense `rows x cols` matrix with entries in `[-1, 1)`.
pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let data = (0..rows * cols).map(|_| rng.gen_range(-1.0..1.0)).collect();
    DenseMatrix::new(rows, cols, data).unwrap()
}

/// `sum_k (hA)^k / k!`, summed until the terms stop contributing.
pub fn series_exp(a: &DenseMatrix, h: f64) -> DenseMatrix {
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

pub fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

pub fn helicoid() -> expoly::LiftedSurface {
    use expoly::basis::SurfaceBasisDescriptor as S;
    let basis = S::union(
        S::v(BasisDescriptor::poly(1)),
        S::product(S::u(BasisDescriptor::poly(1)), S::v(BasisDescriptor::trig(1.0).unwrap())),
    );
    let m_x = DenseMatrix::from_rows(&[
        vec![0., 0., 2., 0., 1., 0.],
        vec![0., 0., 0., 2., 0., 1.],
        vec![0., 1., 0., 0., 0., 0.],
        vec![1., 0., 0., 0., 0., 0.],
        vec![0., 0., 0., 0., 1., 0.],
        vec![0., 0., 0., 0., 0., 1.],
    ])
    .unwrap();
    expoly::LiftedSurface::from_lifted(basis, m_x, 3, false).unwrap()
}

pub const CYCLIDE: (f64, f64, f64, f64) = (6.0, 5.656854249492381, 2.0, 3.0);

/// Homogeneous cyclide coefficients over `(1, sin, cos) x (1, sin, cos)`.
pub fn cyclide_coefficients() -> DenseMatrix {
    let (a, b, c, mu) = CYCLIDE;
    DenseMatrix::from_rows(&[
        vec![mu * c, 0., 0., 0., 0., 0., b * b, 0., -mu * a],
        vec![0., 0., 0., a * b, 0., -mu * b, 0., 0., 0.],
        vec![0., -mu * b, 0., 0., 0., 0., 0., b * c, 0.],
        vec![a, 0., 0., 0., 0., 0., 0., 0., -c],
    ])
    .unwrap()
}

/// Lifted cyclide over `(1, cos, sin) x (1, cos, sin)`.
pub fn cyclide() -> expoly::LiftedSurface {
    let theta = BasisDescriptor::union(BasisDescriptor::poly(0), BasisDescriptor::trig(1.0).unwrap());
    let basis = SurfaceBasisDescriptor::tensor(theta.clone(), theta);
    let p = [0, 2, 1];
    let perm: Vec<usize> = (0..9).map(|j| 3 * p[j / 3] + p[j % 3]).collect();
    let m_x = expoly::lift::lift_matrix(&cyclide_coefficients()).unwrap();
    expoly::LiftedSurface::from_lifted(basis, m_x.permute_columns(&perm).unwrap(), 4, true).unwrap()
}

pub fn cyclide_point(u: f64, v: f64) -> [f64; 3] {
    let (a, b, c, mu) = CYCLIDE;
    let w = a - c * u.cos() * v.cos();
    [
        (mu * (c - a * u.cos() * v.cos()) + b * b * u.cos()) / w,
        b * u.sin() * (a - mu * v.cos()) / w,
        b * v.sin() * (c * u.cos() - mu) / w,
    ]
}
