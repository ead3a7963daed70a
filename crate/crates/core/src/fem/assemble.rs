use crate::fem::mesh::{Chain, Mesh};
use crate::fem::sparse::{SymmetricBuilder, SymmetricSparse};
use crate::graph::MetricGraph;

/// Stiffness `K` (already multiplied by `alpha`), potential matrix `W` and
/// consistent mass `M` on the free DOFs of a mesh.
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    pub mesh: Mesh,
    pub alpha: f64,
    pub stiffness: SymmetricSparse,
    pub potential: SymmetricSparse,
    pub mass: SymmetricSparse,
    /// Potential at every node of every chain, in chain order.
    pub nodal_potential: Vec<Vec<f64>>,
}

impl AssembledSystem {
    pub fn dof_count(&self) -> usize {
        self.mesh.dof_count
    }

    /// `K + W`.
    pub fn hamiltonian(&self) -> SymmetricSparse {
        self.stiffness.combine(1.0, &self.potential, 1.0)
    }

    pub fn min_nodal_potential(&self) -> f64 {
        self.nodal_potential.iter().flatten().copied().fold(0.0, f64::min)
    }
}

pub fn element_stiffness(h: f64) -> [[f64; 2]; 2] {
    [[1.0 / h, -1.0 / h], [-1.0 / h, 1.0 / h]]
}

pub fn element_mass(h: f64) -> [[f64; 2]; 2] {
    [[h / 3.0, h / 6.0], [h / 6.0, h / 3.0]]
}

/// `∫ V φ_i φ_j` with `V` the linear interpolant of its end values.
/// Reduces to `c * element_mass(h)` for constant `V = c`.
pub fn element_potential(h: f64, va: f64, vb: f64) -> [[f64; 2]; 2] {
    let s = h / 12.0;
    [[s * (3.0 * va + vb), s * (va + vb)], [s * (va + vb), s * (va + 3.0 * vb)]]
}

pub fn chain_potential(graph: &MetricGraph, chain: &Chain) -> Vec<f64> {
    let edge = graph.edge(chain.edge);
    (0..=chain.cells).map(|i| edge.potential.eval(chain.node_position(i), edge.length)).collect()
}

pub fn assemble(mesh: &Mesh, graph: &MetricGraph) -> AssembledSystem {
    let n = mesh.dof_count;
    let alpha = graph.alpha();
    let mut k = SymmetricBuilder::new(n);
    let mut w = SymmetricBuilder::new(n);
    let mut m = SymmetricBuilder::new(n);
    let mut nodal_potential = Vec::with_capacity(mesh.chains.len());

    for chain in &mesh.chains {
        let h = chain.h();
        let ke = element_stiffness(h);
        let me = element_mass(h);
        let v = chain_potential(graph, chain);
        for i in 0..chain.cells {
            let dofs = [mesh.node_dof(chain, i), mesh.node_dof(chain, i + 1)];
            let we = element_potential(h, v[i], v[i + 1]);
            for (a, da) in dofs.iter().enumerate() {
                let Some(da) = *da else { continue };
                for (b, db) in dofs.iter().enumerate().skip(a) {
                    let Some(db) = *db else { continue };
                    k.add(da, db, alpha * ke[a][b]);
                    m.add(da, db, me[a][b]);
                    if v[i] != 0.0 || v[i + 1] != 0.0 {
                        w.add(da, db, we[a][b]);
                    }
                }
            }
        }
        nodal_potential.push(v);
    }

    AssembledSystem {
        mesh: mesh.clone(),
        alpha,
        stiffness: k.build(),
        potential: w.build(),
        mass: m.build(),
        nodal_potential,
    }
}
