//! Spectral computations on quantum graphs: finite-element eigenpairs,
//! closed-form oracles, eigenvalue inequality checks, edge colorings of
//! trees and exact nodal analysis of the associated circuits.

pub mod analytic;
pub mod circuit;
pub mod coloring;
pub mod error;
pub mod fem;
pub mod fixtures;
pub mod graph;
pub mod inequality;
pub mod io;
pub mod quadrature;
pub mod report;
pub mod suite;

pub use error::{CheckError, CircuitError, ColoringError, GraphError, OracleError, SolverError};
pub use graph::{BoundaryCondition, Edge, EdgeId, GraphBuilder, MetricGraph, PotentialSpec, VertexId};
