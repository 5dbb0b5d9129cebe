//! Dynamic evaluation of exponential-polynomial curves and surfaces.
//!
//! Curves and surfaces are written as `X = M_X Phi`, where `Phi` is a basis
//! vector built from polynomials, trigonometric and hyperbolic pairs and
//! Bernstein polynomials. Because these spaces are invariant under parameter
//! translation (and, for polynomials, under any affine reparametrization),
//! stepping the parameter is a constant matrix `M_X C M_X^-1` that can be
//! built in closed form. Sampling a curve then costs one small matrix-vector
//! product per point.
//!
//! ```
//! use expoly::{BasisDescriptor, CurveSpec, LiftedCurve};
//!
//! // A unit circle, lifted trivially since (cos, sin) is already square.
//! let spec = CurveSpec::new(
//!     BasisDescriptor::trig(1.0).unwrap(),
//!     vec![vec![1.0, 0.0], vec![0.0, 1.0]],
//! ).unwrap();
//! let curve = LiftedCurve::lift(&spec).unwrap();
//! let pts = curve.run_fixed(0.0, std::f64::consts::FRAC_PI_2, 4).unwrap();
//! assert!((pts[4].point[0] - 1.0).abs() < 1e-12);
//! ```

pub mod basis;
pub mod curve;
pub mod error;
pub mod lift;
pub mod oracle;
pub mod smallmat;
pub mod surface;
pub mod transform;

pub use basis::{BasisDescriptor, Param, SurfaceBasisDescriptor};
pub use curve::{CurveSample, CurveSpec, CurveStream, EvalRun, LiftedCurve};
pub use error::{Error, Result};
pub use smallmat::{DenseMatrix, DenseVector};
pub use surface::{LiftedSurface, Segment, SkewPath, SurfaceSample};
pub use transform::StepSpec;
