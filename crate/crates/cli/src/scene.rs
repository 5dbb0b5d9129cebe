//! JSON scene files.
//!
//! ```json
//! {
//!   "kind": "curve",
//!   "basis": {"union": [{"poly": 0}, {"product": [{"poly": 3}, {"trig": 1}]}]},
//!   "coefficients": [[-1.494, 0.52], [1.494, -0.52], ...],
//!   "run": {"start": 0, "step": {"translate": 0.01}, "count": 100}
//! }
//! ```
//!
//! Surfaces use `"kind": "surface"`, basis leaves tagged by parameter
//! (`{"u": ...}`, `{"v": ...}`, or `{"tensor": [u_basis, v_basis]}`), and a run
//! made of named steps and a schedule:
//!
//! ```json
//! "run": {
//!   "start": [0, 0],
//!   "steps": {"up": {"dv": 0.0628}},
//!   "schedule": [{"step": "up", "count": 200}]
//! }
//! ```

use std::collections::BTreeMap;

use expoly::{
    BasisDescriptor, CurveSpec, DenseMatrix, DenseVector, EvalRun, LiftedCurve, LiftedSurface,
    Segment, StepSpec, SurfaceBasisDescriptor,
};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum BasisNode {
    Poly(usize),
    Trig(f64),
    Hyper(f64),
    Bernstein(usize),
    Union(Vec<BasisNode>),
    Product(Vec<BasisNode>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum SurfaceNode {
    U(BasisNode),
    V(BasisNode),
    Tensor(BasisNode, BasisNode),
    Union(Vec<SurfaceNode>),
    Product(Vec<SurfaceNode>),
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum StepNode {
    Translate(f64),
    Linear { a: f64, b: f64 },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Scene {
    Curve(CurveScene),
    Surface(SurfaceScene),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveScene {
    pub basis: BasisNode,
    pub coefficients: Vec<Vec<f64>>,
    pub run: CurveRun,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveRun {
    #[serde(default)]
    pub start: f64,
    /// Lifted start point; defaults to direct evaluation at `start`.
    #[serde(default)]
    pub start_point: Option<Vec<f64>>,
    pub step: StepNode,
    pub count: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceScene {
    pub basis: SurfaceNode,
    pub coefficients: Vec<Vec<f64>>,
    #[serde(default)]
    pub homogeneous: bool,
    pub run: SurfaceRun,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceRun {
    #[serde(default)]
    pub start: [f64; 2],
    #[serde(default)]
    pub start_point: Option<Vec<f64>>,
    pub steps: BTreeMap<String, StepPair>,
    pub schedule: Vec<ScheduleEntry>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepPair {
    #[serde(default)]
    pub du: f64,
    #[serde(default)]
    pub dv: f64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleEntry {
    pub step: String,
    pub count: usize,
}

/// A curve scene ready to run.
pub struct CurveJob {
    pub curve: LiftedCurve,
    pub run: EvalRun,
}

/// A surface scene ready to run.
pub struct SurfaceJob {
    pub surface: LiftedSurface,
    pub start: [f64; 2],
    pub start_point: Option<Vec<f64>>,
    pub segments: Vec<Segment>,
}

pub enum Job {
    Curve(CurveJob),
    Surface(SurfaceJob),
}

/// Parses and validates scene text. `source` names the file in messages.
pub fn load(source: &str, text: &str) -> CliResult<Job> {
    let scene: Scene = serde_json::from_str(text)
        .map_err(|e| CliError::input(source, Some(e.line()), strip_position(&e.to_string())))?;
    let at = |key: &str, msg: String| CliError::input(source, line_of(text, key), msg);
    match scene {
        Scene::Curve(c) => build_curve(c, &at).map(Job::Curve),
        Scene::Surface(s) => build_surface(s, &at).map(Job::Surface),
    }
}

fn build_curve(c: CurveScene, at: &dyn Fn(&str, String) -> CliError) -> CliResult<CurveJob> {
    let basis = basis_descriptor(&c.basis).map_err(|e| at("basis", e))?;
    check_points(&c.coefficients, basis.dim()).map_err(|e| at("coefficients", e))?;
    let spec = CurveSpec::new(basis, c.coefficients).map_err(|e| at("coefficients", e.to_string()))?;
    let curve = LiftedCurve::lift(&spec)?;
    let step = match c.run.step {
        StepNode::Translate(h) => StepSpec::Translate(h),
        StepNode::Linear { a, b } => StepSpec::Linear { a, b },
    };
    step.validate().map_err(|e| at("step", e.to_string()))?;
    if let StepSpec::Linear { .. } = step {
        if !curve.basis().is_polynomial() {
            return Err(at(
                "linear",
                format!("linear steps need a poly or bernstein basis, got {}", curve.basis()),
            ));
        }
    }
    let mut run = EvalRun::new(c.run.start, step, c.run.count);
    if let Some(x) = c.run.start_point {
        if x.len() != curve.order() {
            return Err(at(
                "start_point",
                format!("start_point has {} coordinates, lifted order is {}", x.len(), curve.order()),
            ));
        }
        run = run.with_start(DenseVector::from(x));
    }
    Ok(CurveJob { curve, run })
}

fn build_surface(s: SurfaceScene, at: &dyn Fn(&str, String) -> CliError) -> CliResult<SurfaceJob> {
    let basis = surface_descriptor(&s.basis).map_err(|e| at("basis", e))?;
    let n = basis.dim();
    check_points(&s.coefficients, n).map_err(|e| at("coefficients", e))?;
    if s.homogeneous && s.coefficients[0].len() < 2 {
        return Err(at("homogeneous", "homogeneous points need at least two coordinates".into()));
    }
    let coeffs = DenseMatrix::from_columns(&s.coefficients).map_err(|e| at("coefficients", e.to_string()))?;
    let surface = LiftedSurface::lift(&coeffs, basis, s.homogeneous)?;
    let mut segments = Vec::with_capacity(s.run.schedule.len());
    for entry in &s.run.schedule {
        let Some(step) = s.run.steps.get(&entry.step) else {
            return Err(at(
                &entry.step,
                format!("schedule references undeclared step \"{}\"", entry.step),
            ));
        };
        if !step.du.is_finite() || !step.dv.is_finite() {
            return Err(at(&entry.step, format!("step \"{}\" is not finite", entry.step)));
        }
        segments.push(Segment::new(step.du, step.dv, entry.count));
    }
    if let Some(x) = &s.run.start_point {
        if x.len() != surface.order() {
            return Err(at(
                "start_point",
                format!("start_point has {} coordinates, lifted order is {}", x.len(), surface.order()),
            ));
        }
    }
    Ok(SurfaceJob {
        surface,
        start: s.run.start,
        start_point: s.run.start_point,
        segments,
    })
}

fn check_points(points: &[Vec<f64>], dim: usize) -> Result<(), String> {
    if points.len() != dim {
        return Err(format!(
            "{} coefficient points for a basis of dimension {dim}",
            points.len()
        ));
    }
    let d = points[0].len();
    if d == 0 {
        return Err("coefficient points must have at least one coordinate".into());
    }
    if let Some(i) = points.iter().position(|p| p.len() != d) {
        return Err(format!(
            "coefficient point {i} has {} coordinates, expected {d}",
            points[i].len()
        ));
    }
    if d > dim {
        return Err(format!("{d} coordinates exceed basis dimension {dim}"));
    }
    Ok(())
}

pub fn basis_descriptor(node: &BasisNode) -> Result<BasisDescriptor, String> {
    let b = match node {
        BasisNode::Poly(n) => BasisDescriptor::poly(*n),
        BasisNode::Bernstein(n) => BasisDescriptor::bernstein(*n),
        BasisNode::Trig(w) => BasisDescriptor::trig(*w).map_err(|e| e.to_string())?,
        BasisNode::Hyper(w) => BasisDescriptor::hyper(*w).map_err(|e| e.to_string())?,
        BasisNode::Union(xs) => BasisDescriptor::union_all(children(xs)?).map_err(|e| e.to_string())?,
        BasisNode::Product(xs) => {
            BasisDescriptor::product_all(children(xs)?).map_err(|e| e.to_string())?
        }
    };
    Ok(b)
}

fn children(xs: &[BasisNode]) -> Result<Vec<BasisDescriptor>, String> {
    xs.iter().map(basis_descriptor).collect()
}

pub fn surface_descriptor(node: &SurfaceNode) -> Result<SurfaceBasisDescriptor, String> {
    let b = match node {
        SurfaceNode::U(b) => SurfaceBasisDescriptor::u(basis_descriptor(b)?),
        SurfaceNode::V(b) => SurfaceBasisDescriptor::v(basis_descriptor(b)?),
        SurfaceNode::Tensor(u, v) => {
            SurfaceBasisDescriptor::tensor(basis_descriptor(u)?, basis_descriptor(v)?)
        }
        SurfaceNode::Union(xs) => SurfaceBasisDescriptor::union_all(
            xs.iter().map(surface_descriptor).collect::<Result<Vec<_>, _>>()?,
        )
        .map_err(|e| e.to_string())?,
        SurfaceNode::Product(xs) => SurfaceBasisDescriptor::product_all(
            xs.iter().map(surface_descriptor).collect::<Result<Vec<_>, _>>()?,
        )
        .map_err(|e| e.to_string())?,
    };
    b.validate().map_err(|e| e.to_string())?;
    Ok(b)
}

/// 1-based line of the first occurrence of `"key"`.
fn line_of(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.find(&needle)
        .map(|pos| text[..pos].matches('\n').count() + 1)
}

/// serde_json appends " at line L column C"; the line is reported separately.
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}
