//! Dynamic evaluation on surfaces `X(u, v) = M_X Phi(u, v)`.
//!
//! Iso-parameter curves, skew (affine) parameter paths and multi-segment
//! schedules all reduce to products with a handful of constant matrices
//! `M_X C_u C_v M_X^-1`.

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use crate::basis::{Param, SurfaceBasisDescriptor};
use crate::curve::conjugate;
use crate::error::{Error, Result};
use crate::lift::lift_matrix;
use crate::smallmat::{DenseMatrix, DenseVector};
use crate::transform::surface_translation_matrices;

/// Smallest homogeneous weight accepted when projecting.
pub const MIN_WEIGHT: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct LiftedSurface {
    basis: SurfaceBasisDescriptor,
    m_x: DenseMatrix,
    m_x_inv: DenseMatrix,
    geometric_dim: usize,
    homogeneous: bool,
    a_u: DenseMatrix,
    a_v: DenseMatrix,
}

impl LiftedSurface {
    /// Lifts a `d x (L+1)` coefficient matrix (one column per basis function).
    pub fn lift(
        coefficients: &DenseMatrix,
        basis: SurfaceBasisDescriptor,
        homogeneous: bool,
    ) -> Result<Self> {
        if coefficients.cols() != basis.dim() {
            return Err(Error::dim(
                "lift_surface",
                format!(
                    "{} coefficients for a basis of dimension {}",
                    coefficients.cols(),
                    basis.dim()
                ),
            ));
        }
        let m_x = lift_matrix(coefficients)?;
        Self::from_lifted(basis, m_x, coefficients.rows(), homogeneous)
    }

    pub fn from_lifted(
        basis: SurfaceBasisDescriptor,
        m_x: DenseMatrix,
        geometric_dim: usize,
        homogeneous: bool,
    ) -> Result<Self> {
        basis.validate()?;
        if !m_x.is_square() || m_x.rows() != basis.dim() {
            return Err(Error::dim(
                "lifted surface",
                format!(
                    "{}x{} matrix for basis of dimension {}",
                    m_x.rows(),
                    m_x.cols(),
                    basis.dim()
                ),
            ));
        }
        if geometric_dim == 0 || geometric_dim > m_x.rows() || (homogeneous && geometric_dim < 2)
        {
            return Err(Error::dim("lifted surface", "bad geometric dimension"));
        }
        let m_x_inv = m_x.inverse()?;
        let (a1, a2) = basis.derivative_matrices();
        let a_u = conjugate(&m_x, &a1, &m_x_inv);
        let a_v = conjugate(&m_x, &a2, &m_x_inv);
        Ok(LiftedSurface {
            basis,
            m_x,
            m_x_inv,
            geometric_dim,
            homogeneous,
            a_u,
            a_v,
        })
    }

    pub fn basis(&self) -> &SurfaceBasisDescriptor {
        &self.basis
    }

    pub fn lifted_matrix(&self) -> &DenseMatrix {
        &self.m_x
    }

    pub fn lifted_inverse(&self) -> &DenseMatrix {
        &self.m_x_inv
    }

    pub fn order(&self) -> usize {
        self.m_x.rows()
    }

    pub fn geometric_dim(&self) -> usize {
        self.geometric_dim
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    /// `(A_u, A_v)`.
    pub fn derivative_matrices(&self) -> (&DenseMatrix, &DenseMatrix) {
        (&self.a_u, &self.a_v)
    }

    /// `(M_u^{h1}, M_v^{h2})`.
    pub fn iso_step_matrices(&self, h1: f64, h2: f64) -> Result<(DenseMatrix, DenseMatrix)> {
        check_finite(&[h1, h2])?;
        let (cu, cv) = surface_translation_matrices(&self.basis, h1, h2);
        Ok((
            conjugate(&self.m_x, &cu, &self.m_x_inv),
            conjugate(&self.m_x, &cv, &self.m_x_inv),
        ))
    }

    /// `M_{u,v}^{h1,h2} = M_X C_u^{h1} C_v^{h2} M_X^-1`.
    pub fn step_matrix(&self, h1: f64, h2: f64) -> Result<DenseMatrix> {
        check_finite(&[h1, h2])?;
        let (cu, cv) = surface_translation_matrices(&self.basis, h1, h2);
        let c = cu.mul(&cv)?;
        Ok(conjugate(&self.m_x, &c, &self.m_x_inv))
    }

    pub fn skew_step_matrix(&self, path: &SkewPath) -> Result<DenseMatrix> {
        path.validate()?;
        self.step_matrix(path.delta * path.h, path.eta * path.h)
    }

    /// `A_gamma = delta A_u + eta A_v`, with `Q'(t) = A_gamma Q(t)` along the path.
    pub fn skew_derivative_matrix(&self, path: &SkewPath) -> Result<DenseMatrix> {
        path.validate()?;
        self.a_u.scale(path.delta).add(&self.a_v.scale(path.eta))
    }

    /// Lifted point by direct evaluation.
    pub fn point_at(&self, u: f64, v: f64) -> DenseVector {
        self.m_x
            .mul_vec(&self.basis.eval(u, v))
            .expect("dimensions agree")
    }

    /// Geometric coordinates of a lifted point (Cartesian if homogeneous).
    pub fn project(&self, lifted: &[f64], index: usize) -> Result<Vec<f64>> {
        let d = self.geometric_dim;
        if !self.homogeneous {
            return Ok(lifted[..d].to_vec());
        }
        let w = lifted[d - 1];
        if !(w.abs() >= MIN_WEIGHT) {
            return Err(Error::ZeroWeight { index, weight: w });
        }
        Ok(lifted[..d - 1].iter().map(|x| x / w).collect())
    }

    /// `m + 1` points along an iso-parameter curve starting at `(u0, v0)`.
    pub fn run_iso(
        &self,
        u0: f64,
        v0: f64,
        start: Option<&[f64]>,
        along: Param,
        h: f64,
        m: usize,
    ) -> Result<Vec<SurfaceSample>> {
        let (du, dv) = match along {
            Param::U => (h, 0.0),
            Param::V => (0.0, h),
        };
        self.run_schedule(u0, v0, start, &[Segment::new(du, dv, m)])
    }

    /// `count + 1` points along `(u0 + delta t, v0 + eta t)`.
    pub fn run_skew(&self, path: &SkewPath, start: Option<&[f64]>) -> Result<Vec<SurfaceSample>> {
        path.validate()?;
        self.run_schedule(
            path.u0,
            path.v0,
            start,
            &[Segment::new(path.delta * path.h, path.eta * path.h, path.count)],
        )
    }

    /// Runs segments back to back, each starting from the previous segment's
    /// last point. Emits the start point plus every computed point.
    pub fn run_schedule(
        &self,
        u0: f64,
        v0: f64,
        start: Option<&[f64]>,
        segments: &[Segment],
    ) -> Result<Vec<SurfaceSample>> {
        check_finite(&[u0, v0])?;
        let mut current = match start {
            Some(x) if x.len() != self.order() => {
                return Err(Error::dim(
                    "run",
                    format!("start point of dimension {} for order {}", x.len(), self.order()),
                ))
            }
            Some(x) => x.to_vec(),
            None => self.point_at(u0, v0).into_inner(),
        };
        let mut cache: HashMap<(u64, u64), DenseMatrix> = HashMap::new();
        for s in segments {
            let key = (s.du.to_bits(), s.dv.to_bits());
            if let Entry::Vacant(e) = cache.entry(key) {
                e.insert(self.step_matrix(s.du, s.dv)?);
            }
        }

        let total: usize = segments.iter().map(|s| s.count).sum();
        let mut out = Vec::with_capacity(total + 1);
        out.push(self.sample(0, u0, v0, &current)?);
        let mut scratch = vec![0.0; self.order()];
        let (mut u, mut v) = (u0, v0);
        let mut index = 0;
        for s in segments {
            let m = &cache[&(s.du.to_bits(), s.dv.to_bits())];
            let (su, sv) = (u, v);
            for k in 1..=s.count {
                m.mul_vec_into(&current, &mut scratch);
                std::mem::swap(&mut current, &mut scratch);
                index += 1;
                u = su + k as f64 * s.du;
                v = sv + k as f64 * s.dv;
                out.push(self.sample(index, u, v, &current)?);
            }
        }
        Ok(out)
    }

    fn sample(&self, index: usize, u: f64, v: f64, lifted: &[f64]) -> Result<SurfaceSample> {
        Ok(SurfaceSample {
            index,
            u,
            v,
            point: self.project(lifted, index)?,
            lifted: lifted.to_vec(),
        })
    }

    /// `A_u^du A_v^dv x`, projected onto the first `d` lifted coordinates.
    ///
    /// Homogeneous surfaces return derivatives of the homogeneous coordinates.
    pub fn surface_partials(&self, x: &[f64], du: usize, dv: usize) -> Result<Vec<f64>> {
        if du + dv == 0 {
            return Err(Error::Precondition(
                "partial derivative order must be at least 1".into(),
            ));
        }
        if x.len() != self.order() {
            return Err(Error::dim(
                "surface_partials",
                format!("point of dimension {} for order {}", x.len(), self.order()),
            ));
        }
        let mut cur = x.to_vec();
        for _ in 0..dv {
            cur = self.a_v.mul_vec(&cur)?.into_inner();
        }
        for _ in 0..du {
            cur = self.a_u.mul_vec(&cur)?.into_inner();
        }
        Ok(cur[..self.geometric_dim].to_vec())
    }
}

fn check_finite(xs: &[f64]) -> Result<()> {
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::Precondition("parameters must be finite".into()));
    }
    Ok(())
}

/// `count` steps of `(du, dv)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub du: f64,
    pub dv: f64,
    pub count: usize,
}

impl Segment {
    pub fn new(du: f64, dv: f64, count: usize) -> Self {
        Segment { du, dv, count }
    }
}

/// Affine parameter path `u = u0 + delta t`, `v = v0 + eta t`, sampled every `h`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkewPath {
    pub u0: f64,
    pub v0: f64,
    pub delta: f64,
    pub eta: f64,
    pub h: f64,
    pub count: usize,
}

impl SkewPath {
    pub fn validate(&self) -> Result<()> {
        check_finite(&[self.u0, self.v0, self.delta, self.eta, self.h])?;
        if self.delta == 0.0 && self.eta == 0.0 {
            return Err(Error::Precondition(
                "skew path needs a nonzero direction".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceSample {
    pub index: usize,
    pub u: f64,
    pub v: f64,
    pub point: Vec<f64>,
    pub lifted: Vec<f64>,
}
