use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {detail}")]
    Dimension { op: &'static str, detail: String },

    #[error("matrix is singular or ill-conditioned (condition estimate {condition:e})")]
    SingularMatrix { condition: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no lifting with condition estimate <= {limit:e} found (best {best:e})")]
    Lifting { best: f64, limit: f64 },

    #[error("step {step} is not supported for basis {basis}")]
    UnsupportedStep { step: String, basis: String },

    #[error("homogeneous weight {weight:e} too close to zero at point {index}")]
    ZeroWeight { index: usize, weight: f64 },
}

impl Error {
    pub(crate) fn dim(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Dimension {
            op,
            detail: detail.into(),
        }
    }

    /// Numeric failures (as opposed to malformed input).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::SingularMatrix { .. } | Error::Lifting { .. } | Error::ZeroWeight { .. }
        )
    }
}
