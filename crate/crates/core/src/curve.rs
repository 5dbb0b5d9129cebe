//! Dynamic evaluation of curves `X(t) = M_X Phi(t)`.
//!
//! Once the coefficient matrix is lifted to an invertible `M_X`, a parameter
//! step becomes the constant matrix `M = M_X C M_X^-1` and every new point is
//! one matrix-vector product away from the previous one.

use crate::basis::BasisDescriptor;
use crate::error::{Error, Result};
use crate::lift::lift_matrix;
use crate::smallmat::{DenseMatrix, DenseVector};
use crate::transform::{step_matrix, StepSpec};

/// A curve given by its basis and control points (one point per basis function).
#[derive(Clone, Debug)]
pub struct CurveSpec {
    pub basis: BasisDescriptor,
    pub control_points: Vec<Vec<f64>>,
}

impl CurveSpec {
    pub fn new(basis: BasisDescriptor, control_points: Vec<Vec<f64>>) -> Result<Self> {
        basis.validate()?;
        if control_points.len() != basis.dim() {
            return Err(Error::dim(
                "curve",
                format!(
                    "{} control points for a basis of dimension {}",
                    control_points.len(),
                    basis.dim()
                ),
            ));
        }
        let d = control_points.first().map_or(0, Vec::len);
        if d == 0 || control_points.iter().any(|p| p.len() != d) {
            return Err(Error::dim("curve", "control points must share a nonzero dimension"));
        }
        if control_points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Precondition("control points must be finite".into()));
        }
        Ok(CurveSpec {
            basis,
            control_points,
        })
    }

    pub fn geometric_dim(&self) -> usize {
        self.control_points[0].len()
    }

    /// `M_P`, one column per control point.
    pub fn coefficient_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_columns(&self.control_points).expect("validated in new")
    }
}

/// A curve lifted to `R^{n+1}` with an invertible coefficient matrix.
#[derive(Clone, Debug)]
pub struct LiftedCurve {
    basis: BasisDescriptor,
    m_x: DenseMatrix,
    m_x_inv: DenseMatrix,
    geometric_dim: usize,
    a_c: DenseMatrix,
}

impl LiftedCurve {
    pub fn lift(spec: &CurveSpec) -> Result<Self> {
        let m_x = lift_matrix(&spec.coefficient_matrix())?;
        Self::from_lifted(spec.basis.clone(), m_x, spec.geometric_dim())
    }

    /// Uses a caller-supplied lifted matrix; its first `geometric_dim` rows
    /// are the geometric coordinates.
    pub fn from_lifted(
        basis: BasisDescriptor,
        m_x: DenseMatrix,
        geometric_dim: usize,
    ) -> Result<Self> {
        basis.validate()?;
        if !m_x.is_square() || m_x.rows() != basis.dim() {
            return Err(Error::dim(
                "lifted curve",
                format!(
                    "{}x{} matrix for basis of dimension {}",
                    m_x.rows(),
                    m_x.cols(),
                    basis.dim()
                ),
            ));
        }
        if geometric_dim == 0 || geometric_dim > m_x.rows() {
            return Err(Error::dim("lifted curve", "bad geometric dimension"));
        }
        let m_x_inv = m_x.inverse()?;
        let a_c = conjugate(&m_x, &basis.derivative_matrix(), &m_x_inv);
        Ok(LiftedCurve {
            basis,
            m_x,
            m_x_inv,
            geometric_dim,
            a_c,
        })
    }

    pub fn basis(&self) -> &BasisDescriptor {
        &self.basis
    }

    pub fn lifted_matrix(&self) -> &DenseMatrix {
        &self.m_x
    }

    pub fn lifted_inverse(&self) -> &DenseMatrix {
        &self.m_x_inv
    }

    pub fn geometric_dim(&self) -> usize {
        self.geometric_dim
    }

    /// Dimension of the lifted space, `n + 1`.
    pub fn order(&self) -> usize {
        self.m_x.rows()
    }

    /// `A_c = M_X A M_X^-1`, so that `X'(t) = A_c X(t)`.
    pub fn derivative_matrix(&self) -> &DenseMatrix {
        &self.a_c
    }

    /// `M_X C M_X^-1` for the given step.
    pub fn iteration_matrix(&self, step: StepSpec) -> Result<DenseMatrix> {
        let c = step_matrix(&self.basis, step)?;
        Ok(conjugate(&self.m_x, &c, &self.m_x_inv))
    }

    /// Lifted point by direct evaluation, `M_X Phi(t)`.
    pub fn point_at(&self, t: f64) -> DenseVector {
        self.m_x.mul_vec(&self.basis.eval(t)).expect("dimensions agree")
    }

    pub fn project(&self, lifted: &[f64]) -> Vec<f64> {
        lifted[..self.geometric_dim].to_vec()
    }

    /// Sets up the point stream for `run`.
    pub fn stream(&self, run: &EvalRun) -> Result<CurveStream<'_>> {
        run.step.validate()?;
        if !run.t0.is_finite() {
            return Err(Error::Precondition("start parameter must be finite".into()));
        }
        let matrix = self.iteration_matrix(run.step)?;
        let start = match &run.start {
            Some(x) if x.dim() != self.order() => {
                return Err(Error::dim(
                    "run",
                    format!("start point of dimension {} for order {}", x.dim(), self.order()),
                ))
            }
            Some(x) => x.to_vec(),
            None => self.point_at(run.t0).into_inner(),
        };
        Ok(CurveStream {
            curve: self,
            matrix,
            step: run.step,
            t0: run.t0,
            count: run.count,
            index: 0,
            current: start,
            scratch: vec![0.0; self.order()],
        })
    }

    pub fn run(&self, run: &EvalRun) -> Result<Vec<CurveSample>> {
        Ok(self.stream(run)?.collect())
    }

    /// `m + 1` points at `t0 + i h`.
    pub fn run_fixed(&self, t0: f64, h: f64, m: usize) -> Result<Vec<CurveSample>> {
        self.run(&EvalRun::new(t0, StepSpec::Translate(h), m))
    }

    /// `m + 1` points following `t_i = a + (b - a) t_{i-1}`.
    pub fn run_linear(&self, t0: f64, a: f64, b: f64, m: usize) -> Result<Vec<CurveSample>> {
        self.run(&EvalRun::new(t0, StepSpec::Linear { a, b }, m))
    }

    /// `A_c x, A_c^2 x, ..., A_c^k x`, each projected to the geometric coordinates.
    pub fn derivatives_at(&self, x: &[f64], order: usize) -> Result<Vec<Vec<f64>>> {
        if x.len() != self.order() {
            return Err(Error::dim(
                "derivatives_at",
                format!("point of dimension {} for order {}", x.len(), self.order()),
            ));
        }
        let mut out = Vec::with_capacity(order);
        let mut cur = x.to_vec();
        for _ in 0..order {
            cur = self.a_c.mul_vec(&cur)?.into_inner();
            out.push(self.project(&cur));
        }
        Ok(out)
    }
}

/// `m c m^-1`.
pub(crate) fn conjugate(m: &DenseMatrix, c: &DenseMatrix, m_inv: &DenseMatrix) -> DenseMatrix {
    m.mul(c)
        .and_then(|x| x.mul(m_inv))
        .expect("square matrices of equal order")
}

/// A configured iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalRun {
    pub t0: f64,
    pub step: StepSpec,
    /// Number of steps; the stream emits `count + 1` points.
    pub count: usize,
    /// Lifted start point; defaults to direct evaluation at `t0`.
    pub start: Option<DenseVector>,
}

impl EvalRun {
    pub fn new(t0: f64, step: StepSpec, count: usize) -> Self {
        EvalRun {
            t0,
            step,
            count,
            start: None,
        }
    }

    pub fn with_start(mut self, start: DenseVector) -> Self {
        self.start = Some(start);
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveSample {
    pub index: usize,
    pub t: f64,
    pub point: Vec<f64>,
    pub lifted: Vec<f64>,
}

/// Iterator over `X(t_0), X(t_1), ...`; each item is one matrix-vector product.
pub struct CurveStream<'a> {
    curve: &'a LiftedCurve,
    matrix: DenseMatrix,
    step: StepSpec,
    t0: f64,
    count: usize,
    index: usize,
    current: Vec<f64>,
    scratch: Vec<f64>,
}

impl CurveStream<'_> {
    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }
}

impl Iterator for CurveStream<'_> {
    type Item = CurveSample;

    fn next(&mut self) -> Option<CurveSample> {
        if self.index > self.count {
            return None;
        }
        if self.index > 0 {
            self.matrix.mul_vec_into(&self.current, &mut self.scratch);
            std::mem::swap(&mut self.current, &mut self.scratch);
        }
        let sample = CurveSample {
            index: self.index,
            t: self.step.param_at(self.t0, self.index),
            point: self.curve.project(&self.current),
            lifted: self.current.clone(),
        };
        self.index += 1;
        Some(sample)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.count + 1).saturating_sub(self.index);
        (left, Some(left))
    }
}

impl ExactSizeIterator for CurveStream<'_> {}
