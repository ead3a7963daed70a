//! P1 finite elements on metric graphs.

pub mod assemble;
pub mod linalg;
pub mod mesh;
pub mod solve;
pub mod sparse;

pub use assemble::{assemble, AssembledSystem};
pub use mesh::{build_mesh, Chain, Mesh};
pub use solve::{
    count_below, eigenvalues_below,
    eigenfunction_samples, graph_eigenvalues, kirchhoff_residuals, per_edge_functionals, solve_eigenvalues,
    solve_graph, solve_spectrum, Spectrum,
};
