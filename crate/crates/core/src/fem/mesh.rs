use crate::error::SolverError;
use crate::graph::{BoundaryCondition, EdgeId, MetricGraph};

/// One coordinate segment of the mesh: a whole edge, or half of a self-loop.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub edge: EdgeId,
    /// Arclength along the original edge where this chain starts.
    pub offset: f64,
    pub length: f64,
    pub cells: usize,
    /// Mesh vertex at arclength `offset` and at `offset + length`.
    pub start: usize,
    pub end: usize,
    /// DOF of the first interior node; interior nodes are contiguous.
    pub first_interior: usize,
}

impl Chain {
    pub fn h(&self) -> f64 {
        self.length / self.cells as f64
    }

    pub fn interior_count(&self) -> usize {
        self.cells - 1
    }

    /// Arclength (along the original edge) of node `i`, `0 <= i <= cells`.
    pub fn node_position(&self, i: usize) -> f64 {
        if i == self.cells {
            self.offset + self.length
        } else {
            self.offset + self.h() * i as f64
        }
    }
}

/// P1 mesh of a metric graph with vertex DOFs shared by all incident edges.
///
/// Mesh vertices are the graph vertices followed by one synthetic midpoint
/// per self-loop. DOFs are numbered vertex DOFs first, then the interior
/// nodes chain by chain; Dirichlet vertices carry no DOF.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub chains: Vec<Chain>,
    pub vertex_dof: Vec<Option<usize>>,
    pub vertex_dof_count: usize,
    pub dof_count: usize,
    pub edge_count: usize,
}

impl Mesh {
    /// Global DOF of node `i` of `chain`, `None` for Dirichlet ends.
    pub fn node_dof(&self, chain: &Chain, i: usize) -> Option<usize> {
        if i == 0 {
            self.vertex_dof[chain.start]
        } else if i == chain.cells {
            self.vertex_dof[chain.end]
        } else {
            Some(chain.first_interior + i - 1)
        }
    }

    /// Nodal values of `x` along `chain`, zero at Dirichlet ends.
    pub fn chain_values(&self, chain: &Chain, x: &[f64]) -> Vec<f64> {
        (0..=chain.cells).map(|i| self.node_dof(chain, i).map_or(0.0, |d| x[d])).collect()
    }

    pub fn chains_of(&self, edge: EdgeId) -> impl Iterator<Item = &Chain> {
        self.chains.iter().filter(move |c| c.edge == edge)
    }

    pub fn cells_of(&self, edge: EdgeId) -> usize {
        self.chains_of(edge).map(|c| c.cells).sum()
    }

    pub fn total_cells(&self) -> usize {
        self.chains.iter().map(|c| c.cells).sum()
    }
}

fn cells_for(length: f64, target_h: f64) -> usize {
    let raw = (length / target_h * (1.0 - 1e-12)).ceil();
    (raw as usize).max(2)
}

/// Uniform mesh with `max(2, ceil(L / target_h))` cells per edge unless the
/// edge carries its own cell count. A self-loop is split into two halves at
/// a synthetic degree-2 vertex; an explicit cell count on a loop is shared
/// between the halves.
pub fn build_mesh(graph: &MetricGraph, target_h: f64) -> Result<Mesh, SolverError> {
    if !(target_h > 0.0) || !target_h.is_finite() {
        return Err(SolverError::BadSpacing(target_h));
    }
    graph.ensure_valid()?;

    let n_vertices = graph.vertex_count();
    let n_loops = graph.edges().iter().filter(|e| e.is_loop()).count();
    let mut vertex_dof = vec![None; n_vertices + n_loops];
    let mut next = 0;
    for v in graph.vertices() {
        if graph.boundary(v) != Some(BoundaryCondition::Dirichlet) {
            vertex_dof[v.0] = Some(next);
            next += 1;
        }
    }
    for slot in vertex_dof.iter_mut().skip(n_vertices) {
        *slot = Some(next);
        next += 1;
    }
    let vertex_dof_count = next;

    let mut chains = Vec::new();
    let mut midpoint = n_vertices;
    for (id, e) in graph.edge_ids().zip(graph.edges()) {
        if e.is_loop() {
            let half = 0.5 * e.length;
            let cells = match e.cells {
                Some(c) => c.div_ceil(2).max(1),
                None => cells_for(half, target_h),
            };
            for (k, (start, end)) in [(e.from.0, midpoint), (midpoint, e.to.0)].into_iter().enumerate() {
                chains.push(Chain {
                    edge: id,
                    offset: half * k as f64,
                    length: half,
                    cells,
                    start,
                    end,
                    first_interior: 0,
                });
            }
            midpoint += 1;
        } else {
            let cells = e.cells.unwrap_or_else(|| cells_for(e.length, target_h));
            chains.push(Chain {
                edge: id,
                offset: 0.0,
                length: e.length,
                cells,
                start: e.from.0,
                end: e.to.0,
                first_interior: 0,
            });
        }
    }
    for chain in &mut chains {
        chain.first_interior = next;
        next += chain.interior_count();
    }

    Ok(Mesh { chains, vertex_dof, vertex_dof_count, dof_count: next, edge_count: graph.edge_count() })
}
