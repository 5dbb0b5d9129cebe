//! Basis vectors built from elementary exponential-polynomial bases.
//!
//! A [`BasisDescriptor`] is a small expression tree. Leaves are the power
//! basis `(1, t, ..., t^n)`, the trigonometric pair `(cos wt, sin wt)`, the
//! hyperbolic pair `(cosh wt, sinh wt)` and the Bernstein basis of degree `n`.
//! Inner nodes concatenate (`Union`) or multiply out (`Product`) their
//! children. Every such space is closed under differentiation, so each
//! descriptor has a constant derivative matrix `A` with `Phi' = A Phi`.
//!
//! Product ordering: `Product(a, b)` emits `a_0 b, a_1 b, ...`, i.e. the left
//! index varies slowest, which is exactly the Kronecker layout used by
//! [`DenseMatrix::kron`].

use std::fmt;

use crate::error::{Error, Result};
use crate::smallmat::{DenseMatrix, DenseVector};

#[derive(Clone, Debug, PartialEq)]
pub enum BasisDescriptor {
    /// `(1, t, ..., t^n)`
    Poly(usize),
    /// `(cos wt, sin wt)`
    Trig(f64),
    /// `(cosh wt, sinh wt)`
    Hyper(f64),
    /// `(B_{0,n}(t), ..., B_{n,n}(t))`
    Bernstein(usize),
    Union(Box<BasisDescriptor>, Box<BasisDescriptor>),
    Product(Box<BasisDescriptor>, Box<BasisDescriptor>),
}

fn check_frequency(w: f64) -> Result<()> {
    if !w.is_finite() || w == 0.0 {
        return Err(Error::Precondition(format!(
            "frequency must be finite and nonzero, got {w}"
        )));
    }
    Ok(())
}

impl BasisDescriptor {
    pub fn poly(n: usize) -> Self {
        BasisDescriptor::Poly(n)
    }

    pub fn bernstein(n: usize) -> Self {
        BasisDescriptor::Bernstein(n)
    }

    pub fn trig(w: f64) -> Result<Self> {
        check_frequency(w)?;
        Ok(BasisDescriptor::Trig(w))
    }

    pub fn hyper(w: f64) -> Result<Self> {
        check_frequency(w)?;
        Ok(BasisDescriptor::Hyper(w))
    }

    pub fn union(a: BasisDescriptor, b: BasisDescriptor) -> Self {
        BasisDescriptor::Union(Box::new(a), Box::new(b))
    }

    pub fn product(a: BasisDescriptor, b: BasisDescriptor) -> Self {
        BasisDescriptor::Product(Box::new(a), Box::new(b))
    }

    /// Left-folded union of one or more children.
    pub fn union_all(children: impl IntoIterator<Item = BasisDescriptor>) -> Result<Self> {
        fold(children, Self::union, "union")
    }

    /// Left-folded product of one or more children.
    pub fn product_all(children: impl IntoIterator<Item = BasisDescriptor>) -> Result<Self> {
        fold(children, Self::product, "product")
    }

    /// Checks the frequency invariant on every leaf.
    pub fn validate(&self) -> Result<()> {
        match self {
            BasisDescriptor::Trig(w) | BasisDescriptor::Hyper(w) => check_frequency(*w),
            BasisDescriptor::Poly(_) | BasisDescriptor::Bernstein(_) => Ok(()),
            BasisDescriptor::Union(a, b) | BasisDescriptor::Product(a, b) => {
                a.validate()?;
                b.validate()
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            BasisDescriptor::Poly(n) | BasisDescriptor::Bernstein(n) => n + 1,
            BasisDescriptor::Trig(_) | BasisDescriptor::Hyper(_) => 2,
            BasisDescriptor::Union(a, b) => a.dim() + b.dim(),
            BasisDescriptor::Product(a, b) => a.dim() * b.dim(),
        }
    }

    /// True for the bases whose span is invariant under `t -> a0 t + a1`.
    pub fn is_polynomial(&self) -> bool {
        matches!(self, BasisDescriptor::Poly(_) | BasisDescriptor::Bernstein(_))
    }

    /// Evaluates `Phi(t)` with the host's transcendental functions.
    pub fn eval(&self, t: f64) -> DenseVector {
        let mut out = Vec::with_capacity(self.dim());
        self.eval_into(t, &mut out);
        out.into()
    }

    fn eval_into(&self, t: f64, out: &mut Vec<f64>) {
        match self {
            BasisDescriptor::Poly(n) => {
                let mut p = 1.0;
                for _ in 0..=*n {
                    out.push(p);
                    p *= t;
                }
            }
            BasisDescriptor::Trig(w) => {
                let (s, c) = (w * t).sin_cos();
                out.extend([c, s]);
            }
            BasisDescriptor::Hyper(w) => out.extend([(w * t).cosh(), (w * t).sinh()]),
            BasisDescriptor::Bernstein(n) => out.extend(bernstein_all(*n, t)),
            BasisDescriptor::Union(a, b) => {
                a.eval_into(t, out);
                b.eval_into(t, out);
            }
            BasisDescriptor::Product(a, b) => {
                let left = a.eval(t);
                let right = b.eval(t);
                for &x in left.iter() {
                    out.extend(right.iter().map(|y| x * y));
                }
            }
        }
    }

    /// The matrix `A` with `d/dt Phi(t) = A Phi(t)`.
    pub fn derivative_matrix(&self) -> DenseMatrix {
        match self {
            BasisDescriptor::Poly(n) => {
                let mut a = DenseMatrix::zeros(n + 1, n + 1);
                for i in 1..=*n {
                    a[(i, i - 1)] = i as f64;
                }
                a
            }
            BasisDescriptor::Trig(w) => {
                let mut a = DenseMatrix::zeros(2, 2);
                a[(0, 1)] = -w;
                a[(1, 0)] = *w;
                a
            }
            BasisDescriptor::Hyper(w) => {
                let mut a = DenseMatrix::zeros(2, 2);
                a[(0, 1)] = *w;
                a[(1, 0)] = *w;
                a
            }
            BasisDescriptor::Bernstein(n) => bernstein_derivative_matrix(*n),
            BasisDescriptor::Union(a, b) => a
                .derivative_matrix()
                .block_diag(&b.derivative_matrix())
                .expect("derivative matrices are square"),
            BasisDescriptor::Product(a, b) => {
                kron_sum(&a.derivative_matrix(), &b.derivative_matrix())
            }
        }
    }
}

fn fold<T>(
    children: impl IntoIterator<Item = T>,
    join: impl Fn(T, T) -> T,
    what: &str,
) -> Result<T> {
    let mut it = children.into_iter();
    let first = it
        .next()
        .ok_or_else(|| Error::Precondition(format!("{what} needs at least one child")))?;
    Ok(it.fold(first, join))
}

/// `A (x) I + I (x) B`, the derivative matrix of a product basis.
pub(crate) fn kron_sum(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let left = a.kron(&DenseMatrix::identity(b.rows()));
    let right = DenseMatrix::identity(a.rows()).kron(b);
    left.add(&right).expect("kron sum shapes agree")
}

/// All Bernstein polynomials of degree `n` at `t`, built with the
/// de Casteljau triangle `B_{i,l} = (1-t) B_{i,l-1} + t B_{i-1,l-1}`.
pub fn bernstein_all(n: usize, t: f64) -> Vec<f64> {
    let mut b = vec![0.0; n + 1];
    b[0] = 1.0;
    let s = 1.0 - t;
    for l in 1..=n {
        for i in (1..=l).rev() {
            b[i] = s * b[i] + t * b[i - 1];
        }
        b[0] *= s;
    }
    b
}

/// Tridiagonal derivative matrix of the degree-`n` Bernstein basis:
/// `B'_i = (n-i+1) B_{i-1} + (2i-n) B_i - (i+1) B_{i+1}`.
fn bernstein_derivative_matrix(n: usize) -> DenseMatrix {
    let mut a = DenseMatrix::zeros(n + 1, n + 1);
    for i in 0..=n {
        if i > 0 {
            a[(i, i - 1)] = (n - i + 1) as f64;
        }
        a[(i, i)] = 2.0 * i as f64 - n as f64;
        if i < n {
            a[(i, i + 1)] = -((i + 1) as f64);
        }
    }
    a
}

impl fmt::Display for BasisDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisDescriptor::Poly(n) => write!(f, "poly({n})"),
            BasisDescriptor::Trig(w) => write!(f, "trig({w})"),
            BasisDescriptor::Hyper(w) => write!(f, "hyper({w})"),
            BasisDescriptor::Bernstein(n) => write!(f, "bernstein({n})"),
            BasisDescriptor::Union(a, b) => write!(f, "union({a}, {b})"),
            BasisDescriptor::Product(a, b) => write!(f, "product({a}, {b})"),
        }
    }
}

/// Which surface parameter a factor consumes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Param {
    U,
    V,
}

/// Bivariate basis: a tree whose leaves are univariate bases in `u` or `v`.
///
/// The plain tensor product `Phi_1(u) (x) Phi_2(v)` is
/// [`SurfaceBasisDescriptor::tensor`]; mixed layouts such as
/// `(1, v, cos v, sin v, u cos v, u sin v)` are unions of such products.
#[derive(Clone, Debug, PartialEq)]
pub enum SurfaceBasisDescriptor {
    Factor(Param, BasisDescriptor),
    Union(Box<SurfaceBasisDescriptor>, Box<SurfaceBasisDescriptor>),
    Product(Box<SurfaceBasisDescriptor>, Box<SurfaceBasisDescriptor>),
}

impl SurfaceBasisDescriptor {
    pub fn u(b: BasisDescriptor) -> Self {
        SurfaceBasisDescriptor::Factor(Param::U, b)
    }

    pub fn v(b: BasisDescriptor) -> Self {
        SurfaceBasisDescriptor::Factor(Param::V, b)
    }

    pub fn tensor(u_basis: BasisDescriptor, v_basis: BasisDescriptor) -> Self {
        Self::product(Self::u(u_basis), Self::v(v_basis))
    }

    pub fn union(a: Self, b: Self) -> Self {
        SurfaceBasisDescriptor::Union(Box::new(a), Box::new(b))
    }

    pub fn product(a: Self, b: Self) -> Self {
        SurfaceBasisDescriptor::Product(Box::new(a), Box::new(b))
    }

    pub fn union_all(children: impl IntoIterator<Item = Self>) -> Result<Self> {
        fold(children, Self::union, "union")
    }

    pub fn product_all(children: impl IntoIterator<Item = Self>) -> Result<Self> {
        fold(children, Self::product, "product")
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SurfaceBasisDescriptor::Factor(_, b) => b.validate(),
            SurfaceBasisDescriptor::Union(a, b) | SurfaceBasisDescriptor::Product(a, b) => {
                a.validate()?;
                b.validate()
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SurfaceBasisDescriptor::Factor(_, b) => b.dim(),
            SurfaceBasisDescriptor::Union(a, b) => a.dim() + b.dim(),
            SurfaceBasisDescriptor::Product(a, b) => a.dim() * b.dim(),
        }
    }

    pub fn eval(&self, u: f64, v: f64) -> DenseVector {
        match self {
            SurfaceBasisDescriptor::Factor(Param::U, b) => b.eval(u),
            SurfaceBasisDescriptor::Factor(Param::V, b) => b.eval(v),
            SurfaceBasisDescriptor::Union(a, b) => {
                let mut out = a.eval(u, v).into_inner();
                out.extend_from_slice(&b.eval(u, v));
                out.into()
            }
            SurfaceBasisDescriptor::Product(a, b) => {
                let left = a.eval(u, v);
                let right = b.eval(u, v);
                let mut out = Vec::with_capacity(left.dim() * right.dim());
                for &x in left.iter() {
                    out.extend(right.iter().map(|y| x * y));
                }
                out.into()
            }
        }
    }

    /// Partial derivative matrix with respect to `p`.
    pub fn derivative_matrix(&self, p: Param) -> DenseMatrix {
        match self {
            SurfaceBasisDescriptor::Factor(q, b) if *q == p => b.derivative_matrix(),
            SurfaceBasisDescriptor::Factor(_, b) => DenseMatrix::zeros(b.dim(), b.dim()),
            SurfaceBasisDescriptor::Union(a, b) => a
                .derivative_matrix(p)
                .block_diag(&b.derivative_matrix(p))
                .expect("derivative matrices are square"),
            SurfaceBasisDescriptor::Product(a, b) => {
                kron_sum(&a.derivative_matrix(p), &b.derivative_matrix(p))
            }
        }
    }

    /// `(A_1, A_2)` with `dPhi/du = A_1 Phi` and `dPhi/dv = A_2 Phi`.
    pub fn derivative_matrices(&self) -> (DenseMatrix, DenseMatrix) {
        (
            self.derivative_matrix(Param::U),
            self.derivative_matrix(Param::V),
        )
    }
}

impl fmt::Display for SurfaceBasisDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceBasisDescriptor::Factor(Param::U, b) => write!(f, "u:{b}"),
            SurfaceBasisDescriptor::Factor(Param::V, b) => write!(f, "v:{b}"),
            SurfaceBasisDescriptor::Union(a, b) => write!(f, "union({a}, {b})"),
            SurfaceBasisDescriptor::Product(a, b) => write!(f, "product({a}, {b})"),
        }
    }
}
