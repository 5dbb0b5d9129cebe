//! Reference evaluators.
//!
//! These never touch the dynamic recurrences: direct evaluation uses the
//! host's `sin`/`cos`/`exp`, de Casteljau and Horner work on control points,
//! and the Taylor comparator reproduces the fixed-order ODE stepping that the
//! closed-form transforms replace.

use crate::basis::{BasisDescriptor, SurfaceBasisDescriptor};
use crate::error::{Error, Result};
use crate::smallmat::{DenseMatrix, DenseVector};

/// `M_P Phi(t)` for a `d x N` coefficient matrix.
pub fn direct_eval(coefficients: &DenseMatrix, basis: &BasisDescriptor, t: f64) -> Result<DenseVector> {
    coefficients.mul_vec(&basis.eval(t))
}

/// `M_P Phi(u, v)`.
pub fn direct_eval_surface(
    coefficients: &DenseMatrix,
    basis: &SurfaceBasisDescriptor,
    u: f64,
    v: f64,
) -> Result<DenseVector> {
    coefficients.mul_vec(&basis.eval(u, v))
}

/// Bezier point by repeated linear interpolation.
pub fn de_casteljau(points: &[Vec<f64>], t: f64) -> Vec<f64> {
    assert!(!points.is_empty(), "de Casteljau needs at least one point");
    let d = points[0].len();
    let mut flat: Vec<f64> = points.concat();
    let mut out = vec![0.0; d];
    de_casteljau_in_place(&mut flat, d, t, &mut out);
    out
}

/// De Casteljau on a flat `[x0, y0, x1, y1, ...]` buffer, overwriting it.
pub fn de_casteljau_in_place(work: &mut [f64], dim: usize, t: f64, out: &mut [f64]) {
    let n = work.len() / dim;
    let s = 1.0 - t;
    for level in 1..n {
        for i in 0..n - level {
            for k in 0..dim {
                work[i * dim + k] = s * work[i * dim + k] + t * work[(i + 1) * dim + k];
            }
        }
    }
    out.copy_from_slice(&work[..dim]);
}

/// Tensor-product Bezier point; `net[i][j]` multiplies `B_i(u) B_j(v)`.
pub fn de_casteljau_surface(net: &[Vec<Vec<f64>>], u: f64, v: f64) -> Vec<f64> {
    let rows: Vec<Vec<f64>> = net.iter().map(|row| de_casteljau(row, v)).collect();
    de_casteljau(&rows, u)
}

/// Power-form polynomial `sum_k c_k t^k` by nested multiplication.
pub fn horner_power(coefficients: &[Vec<f64>], t: f64) -> Vec<f64> {
    assert!(!coefficients.is_empty(), "Horner needs at least one coefficient");
    let d = coefficients[0].len();
    coefficients.iter().rev().fold(vec![0.0; d], |acc, c| {
        acc.iter().zip(c).map(|(a, c)| a * t + c).collect()
    })
}

/// Power-form coefficients of a Bezier curve:
/// `c_k = sum_{i<=k} P_i C(n,i) C(n-i,k-i) (-1)^(k-i)`.
pub fn bezier_to_power(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = points.len() - 1;
    let binom = crate::transform::binomials(n);
    let d = points[0].len();
    (0..=n)
        .map(|k| {
            let mut c = vec![0.0; d];
            for (i, p) in points.iter().enumerate().take(k + 1) {
                let sign = if (k - i) % 2 == 0 { 1.0 } else { -1.0 };
                let w = sign * binom[n][i] * binom[n - i][k - i];
                for (x, y) in c.iter_mut().zip(p) {
                    *x += w * y;
                }
            }
            c
        })
        .collect()
}

/// Truncated exponential `sum_{k=0}^{s} (hA)^k / k!`, the one-step matrix of
/// an order-`s` Taylor method for `X' = A X`.
pub fn taylor_ode_step_matrix(a: &DenseMatrix, h: f64, s: usize) -> Result<DenseMatrix> {
    if s == 0 {
        return Err(Error::Precondition("Taylor order must be at least 1".into()));
    }
    if !a.is_square() {
        return Err(Error::dim("taylor_ode_step_matrix", "matrix must be square"));
    }
    let ha = a.scale(h);
    let mut term = DenseMatrix::identity(a.rows());
    let mut sum = term.clone();
    for k in 1..=s {
        term = term.mul(&ha)?.scale(1.0 / k as f64);
        sum = sum.add(&term)?;
    }
    Ok(sum)
}
