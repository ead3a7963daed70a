use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid graph: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("graph file: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("mesh spacing must be positive, got {0}")]
    BadSpacing(f64),
    #[error("requested {requested} eigenpairs but only {available} degrees of freedom")]
    TooManyEigenpairs { requested: usize, available: usize },
    #[error("requested zero eigenpairs")]
    NoEigenpairs,
    #[error("eigensolver failure: {0}")]
    Numeric(String),
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("root bracket [{lo}, {hi}] does not change sign")]
    Bracket { lo: f64, hi: f64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

#[derive(Debug, Error)]
pub enum CheckError {
    #[error("spectrum does not cover the grid: needs eigenvalues above {needed}, largest trusted is {available}")]
    Coverage { needed: f64, available: f64 },
    #[error("check needs a {expected} graph, got {found}")]
    Topology { expected: String, found: String },
    #[error("check requires {0}")]
    Precondition(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

#[derive(Debug, Error)]
pub enum ColoringError {
    #[error("colorings are defined here for trees only (Betti number {0})")]
    NotATree(usize),
    #[error("{0} edges exceed the exhaustive enumeration limit of {1}")]
    TooManyEdges(usize, usize),
    #[error("coloring violates vertex parity at {0}")]
    Parity(String),
    #[error("edge counts are not uniform: {0:?}")]
    NonUniform(Vec<u64>),
}

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("nodal system is singular: component without a terminal")]
    Singular,
    #[error("expected {expected} terminal voltages, got {found}")]
    VoltageCount { expected: usize, found: usize },
    #[error("circuit needs at least one terminal")]
    NoTerminals,
    #[error("edge length {0} cannot be represented as a rational")]
    Length(f64),
}
