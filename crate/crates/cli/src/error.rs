use qgraph::{CheckError, CircuitError, ColoringError, GraphError, OracleError, SolverError};

#[derive(Debug)]
pub enum CliError {
    /// A theorem-backed check failed or an expected violation did not show.
    CheckFailed(String),
    Input(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CheckFailed(_) => 1,
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::CheckFailed(m) | CliError::Input(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Numeric(_) => CliError::Numeric(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Bracket { .. } => CliError::Numeric(e.to_string()),
            OracleError::Parameter(_) => CliError::Input(e.to_string()),
        }
    }
}

impl From<CheckError> for CliError {
    fn from(e: CheckError) -> Self {
        match e {
            CheckError::Solver(s) => s.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<ColoringError> for CliError {
    fn from(e: ColoringError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CircuitError> for CliError {
    fn from(e: CircuitError) -> Self {
        CliError::Input(e.to_string())
    }
}
