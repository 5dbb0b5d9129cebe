//! Lifting a `d x N` coefficient matrix to an invertible `N x N` one.
//!
//! The original rows are kept on top, so projecting a lifted point onto its
//! first `d` coordinates gives back the original point. Extra rows are unit
//! rows `e_j` on the columns not used as pivots. The trailing columns are
//! preferred as pivots, giving the block pattern `[[H1, H2], [I, 0]]`, unless
//! another choice is much better conditioned. If no unit-row augmentation is
//! usable the extra rows are taken from an orthonormal complement of the row
//! space.

use crate::error::{Error, Result};
use crate::smallmat::{DenseMatrix, MAX_CONDITION};

/// Unit-row augmentations above this condition estimate are never used.
pub const PREFERRED_CONDITION: f64 = 1e8;

/// A fixed pivot pattern is kept only within this factor of the best
/// attainable unit-row condition.
const CONDITION_SLACK: f64 = 10.0;

/// Pivot subsets searched exhaustively up to this count.
const EXHAUSTIVE_LIMIT: f64 = 20_000.0;

const MAX_SWEEPS: usize = 64;

/// Lifts `m_p` (d x N, d <= N) to an N x N matrix whose first `d` rows are `m_p`.
pub fn lift_matrix(m_p: &DenseMatrix) -> Result<DenseMatrix> {
    let (d, n) = (m_p.rows(), m_p.cols());
    if d > n {
        return Err(Error::dim(
            "lift",
            format!("{d} coordinates exceed basis dimension {n}"),
        ));
    }
    if d == n {
        let cond = m_p.condition_estimate();
        if cond > MAX_CONDITION {
            return Err(Error::Lifting {
                best: cond,
                limit: MAX_CONDITION,
            });
        }
        return Ok(m_p.clone());
    }

    let best = best_pivots(m_p);
    let best_cond = unit_row_condition(m_p, &best);
    let limit = PREFERRED_CONDITION.min(CONDITION_SLACK * best_cond);
    let candidates = [
        (n - d..n).collect::<Vec<_>>(),
        greedy_pivots(m_p),
        (0..d).collect(),
        best,
    ];
    for pivots in candidates {
        if unit_row_condition(m_p, &pivots) <= limit {
            return Ok(with_unit_rows(m_p, &pivots));
        }
    }

    let lifted = with_complement_rows(m_p);
    let cond = lifted.condition_estimate();
    if cond <= MAX_CONDITION {
        return Ok(lifted);
    }
    Err(Error::Lifting {
        best: best_cond.min(cond),
        limit: MAX_CONDITION,
    })
}

/// `||L||_inf ||L^-1||_inf` for the unit-row lifting `L` with the given pivots.
///
/// With columns reordered pivots-first, `L = [[P, R], [0, I]]` and
/// `L^-1 = [[P^-1, -P^-1 R], [0, I]]`, so only the `d x d` block is inverted.
fn unit_row_condition(m_p: &DenseMatrix, pivots: &[usize]) -> f64 {
    let (d, n) = (m_p.rows(), m_p.cols());
    let cols: Vec<Vec<f64>> = pivots.iter().map(|&j| m_p.column(j)).collect();
    let Ok(p_inv) = DenseMatrix::from_columns(&cols).and_then(|p| p.inverse()) else {
        return f64::INFINITY;
    };
    let rest: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    let norm = (0..d)
        .map(|i| m_p.row(i).iter().map(|x| x.abs()).sum::<f64>())
        .fold(1.0, f64::max);
    let mut inv_norm = 1.0f64;
    for k in 0..d {
        let mut sum: f64 = p_inv.row(k).iter().map(|x| x.abs()).sum();
        for &j in &rest {
            let c: f64 = (0..d).map(|i| p_inv[(k, i)] * m_p[(i, j)]).sum();
            sum += c.abs();
        }
        inv_norm = inv_norm.max(sum);
    }
    norm * inv_norm
}

/// Pivot set with the smallest unit-row condition: exhaustive for small
/// problems, otherwise single swaps from the greedy choice until none helps.
fn best_pivots(m_p: &DenseMatrix) -> Vec<usize> {
    let (d, n) = (m_p.rows(), m_p.cols());
    if binomial(n, d) <= EXHAUSTIVE_LIMIT {
        let mut pivots: Vec<usize> = (0..d).collect();
        let mut best = (unit_row_condition(m_p, &pivots), pivots.clone());
        while next_combination(&mut pivots, n) {
            let c = unit_row_condition(m_p, &pivots);
            if c < best.0 {
                best = (c, pivots.clone());
            }
        }
        return best.1;
    }
    let mut pivots = greedy_pivots(m_p);
    let mut cond = unit_row_condition(m_p, &pivots);
    for _ in 0..MAX_SWEEPS {
        let mut improved = false;
        for k in 0..d {
            for j in (0..n).filter(|j| !pivots.contains(j)) {
                let mut trial = pivots.clone();
                trial[k] = j;
                trial.sort_unstable();
                let c = unit_row_condition(m_p, &trial);
                if c < cond {
                    (pivots, cond, improved) = (trial, c, true);
                    break;
                }
            }
        }
        if !improved {
            break;
        }
    }
    pivots
}

/// Advances a sorted `d`-subset of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let d = c.len();
    for i in (0..d).rev() {
        if c[i] < n - d + i {
            c[i] += 1;
            for k in i + 1..d {
                c[k] = c[k - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Column-pivoted Gram-Schmidt: repeatedly take the column with the largest
/// residual after projecting out the columns already chosen.
fn greedy_pivots(m_p: &DenseMatrix) -> Vec<usize> {
    let (d, n) = (m_p.rows(), m_p.cols());
    let mut residual: Vec<Vec<f64>> = (0..n).map(|j| m_p.column(j)).collect();
    let mut chosen = Vec::with_capacity(d);
    for _ in 0..d {
        let (best, _) = residual
            .iter()
            .enumerate()
            .filter(|(j, _)| !chosen.contains(j))
            .map(|(j, r)| (j, dot(r, r)))
            .fold((usize::MAX, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        chosen.push(best);
        let norm = dot(&residual[best], &residual[best]).sqrt();
        if norm == 0.0 {
            continue;
        }
        let q: Vec<f64> = residual[best].iter().map(|x| x / norm).collect();
        for r in residual.iter_mut() {
            let c = dot(r, &q);
            for (x, y) in r.iter_mut().zip(&q) {
                *x -= c * y;
            }
        }
    }
    chosen.sort_unstable();
    chosen
}

fn with_unit_rows(m_p: &DenseMatrix, pivots: &[usize]) -> DenseMatrix {
    let (d, n) = (m_p.rows(), m_p.cols());
    let mut extra = DenseMatrix::zeros(n - d, n);
    for (row, col) in (0..n).filter(|j| !pivots.contains(j)).enumerate() {
        extra[(row, col)] = 1.0;
    }
    m_p.vstack(&extra).expect("same column count")
}

/// Rows spanning the orthogonal complement of the row space of `m_p`,
/// seeded deterministically.
fn with_complement_rows(m_p: &DenseMatrix) -> DenseMatrix {
    let (d, n) = (m_p.rows(), m_p.cols());
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    for i in 0..d {
        let mut r = m_p.row(i).to_vec();
        if orthogonalize(&mut r, &basis) {
            basis.push(r);
        }
    }
    let mut rng = SplitMix64(0x5eed_1f7e_u64);
    let mut extra = Vec::with_capacity(n - d);
    let mut attempts = 0;
    while extra.len() < n - d && attempts < 64 * n {
        attempts += 1;
        let mut r: Vec<f64> = (0..n).map(|_| rng.next_f64() * 2.0 - 1.0).collect();
        if orthogonalize(&mut r, &basis) {
            basis.push(r.clone());
            extra.push(r);
        }
    }
    while extra.len() < n - d {
        extra.push(vec![0.0; n]);
    }
    let extra = DenseMatrix::new(n - d, n, extra.concat()).expect("finite rows");
    m_p.vstack(&extra).expect("same column count")
}

/// Two passes of modified Gram-Schmidt against an orthonormal set, then
/// normalization. Returns false if the vector collapses.
fn orthogonalize(r: &mut [f64], basis: &[Vec<f64>]) -> bool {
    let start = dot(r, r).sqrt();
    if start == 0.0 {
        return false;
    }
    for _ in 0..2 {
        for q in basis {
            let c = dot(r, q);
            for (x, y) in r.iter_mut().zip(q) {
                *x -= c * y;
            }
        }
    }
    let norm = dot(r, r).sqrt();
    if norm <= 1e-10 * start {
        return false;
    }
    r.iter_mut().for_each(|x| *x /= norm);
    true
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}
