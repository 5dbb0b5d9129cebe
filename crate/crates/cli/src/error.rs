use std::fmt;

/// Failures surfaced by the command-line tool, grouped by exit status.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or inconsistent input. `line` anchors the message in the scene file.
    Input { source: String, line: Option<usize>, message: String },
    /// The numerics failed on well-formed input.
    Numeric(expoly::Error),
    Io { path: String, error: std::io::Error },
}

impl CliError {
    pub fn input(source: impl Into<String>, line: Option<usize>, message: impl Into<String>) -> Self {
        CliError::Input {
            source: source.into(),
            line,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numeric(_) => 3,
            CliError::Input { .. } | CliError::Io { .. } => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input { source, line: Some(l), message } => write!(f, "{source}:{l}: {message}"),
            CliError::Input { source, line: None, message } => write!(f, "{source}: {message}"),
            CliError::Numeric(e) => write!(f, "numeric error: {}: {e}", numeric_name(e)),
            CliError::Io { path, error } => write!(f, "{path}: {error}"),
        }
    }
}

impl std::error::Error for CliError {}

fn numeric_name(e: &expoly::Error) -> &'static str {
    match e {
        expoly::Error::Lifting { .. } => "LiftingError",
        expoly::Error::SingularMatrix { .. } => "SingularMatrixError",
        expoly::Error::ZeroWeight { .. } => "ZeroWeightError",
        expoly::Error::Dimension { .. } => "DimensionError",
        expoly::Error::Precondition(_) => "PreconditionError",
        expoly::Error::UnsupportedStep { .. } => "UnsupportedStepError",
    }
}

/// Core errors raised while running an already-validated command.
/// Non-numeric ones mean the input was inconsistent.
impl From<expoly::Error> for CliError {
    fn from(e: expoly::Error) -> Self {
        if e.is_numeric() {
            CliError::Numeric(e)
        } else {
            CliError::input("input", None, format!("{}: {e}", numeric_name(&e)))
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
