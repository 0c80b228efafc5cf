use helfrich_core::cmc::CmcError;
use helfrich_core::functional::FunctionalError;
use helfrich_core::geometry::GeometryError;
use helfrich_core::radical_algebra::AlgebraError;
use helfrich_core::shape_residual::ResidualError;

/// Failures, each with its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    /// The reader of standard output went away; not reported.
    #[error("output closed")]
    Closed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Numeric(_) => 4,
            CliError::Closed => 0,
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::SingularAxis | GeometryError::NoAxisLimit | GeometryError::Undefined { .. } => {
                CliError::Numeric(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ResidualError> for CliError {
    fn from(e: ResidualError) -> Self {
        match e {
            ResidualError::Geometry(g) => g.into(),
            ResidualError::VerticalTangent { .. } | ResidualError::DerivativeUnavailable { .. } => {
                CliError::Numeric(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<FunctionalError> for CliError {
    fn from(e: FunctionalError) -> Self {
        match e {
            FunctionalError::Geometry(g) => g.into(),
            FunctionalError::InvalidOption { .. } => CliError::Input(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<CmcError> for CliError {
    fn from(e: CmcError) -> Self {
        match e {
            CmcError::Functional(f) => f.into(),
            CmcError::Quadrature(_) => CliError::Numeric(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        CliError::Verification(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return CliError::Closed;
        }
        CliError::Input(format!("cannot write output: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        if let csv::ErrorKind::Io(io) = e.kind() {
            if io.kind() == std::io::ErrorKind::BrokenPipe {
                return CliError::Closed;
            }
        }
        CliError::Input(format!("cannot write output: {e}"))
    }
}
