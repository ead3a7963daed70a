//! Lowest eigenpairs of the pencil `(K + W, M)`.
//!
//! Eigenvalues come from bisection on the Sylvester inertia of `A - σB`,
//! which is cheap here: eliminating the tridiagonal chain interiors leaves
//! a dense Schur complement on the handful of vertex DOFs. Eigenvectors
//! come from shifted inverse iteration with a banded LU in reverse
//! Cuthill–McKee order. Both stages are deterministic.

use crate::error::SolverError;
use crate::fem::assemble::AssembledSystem;
use crate::fem::linalg::{negative_inertia, reverse_cuthill_mckee, BandedLu};
use crate::fem::mesh::Mesh;
use crate::fem::sparse::SymmetricSparse;
use crate::graph::{EdgeId, MetricGraph, VertexId};

/// Refuse meshes beyond this many free DOFs; coarsen instead.
pub const MAX_DOFS: usize = 100_000;

/// Eigenvalues whose relative gap is below this are solved as one block.
pub const DEGENERACY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// M-normalized coefficient vectors over the free DOFs.
    pub eigenvectors: Vec<Vec<f64>>,
    /// `edge_mass[j][m]`: squared L2 norm of eigenfunction `j` on edge `m`.
    pub edge_mass: Vec<Vec<f64>>,
    /// `edge_dirichlet[j][m]`: squared L2 norm of its derivative on edge `m`.
    pub edge_dirichlet: Vec<Vec<f64>>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `‖φ_j′‖²` over the whole graph.
    pub fn gradient_norms(&self) -> Vec<f64> {
        self.edge_dirichlet.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn ratio(&self, j: usize, i: usize) -> f64 {
        self.eigenvalues[j] / self.eigenvalues[i]
    }
}

struct ChainBlock {
    diag: (Vec<f64>, Vec<f64>),
    off: (Vec<f64>, Vec<f64>),
    left: Option<(usize, f64, f64)>,
    right: Option<(usize, f64, f64)>,
}

/// `A - σB` split into chain interiors and the vertex block.
struct Pencil {
    nv: usize,
    vertex_a: Vec<f64>,
    vertex_b: Vec<f64>,
    chains: Vec<ChainBlock>,
    pivmin: f64,
}

impl Pencil {
    fn new(mesh: &Mesh, a: &SymmetricSparse, b: &SymmetricSparse) -> Self {
        let nv = mesh.vertex_dof_count;
        let mut vertex_a = vec![0.0; nv * nv];
        let mut vertex_b = vec![0.0; nv * nv];
        for i in 0..nv {
            for j in 0..nv {
                vertex_a[i * nv + j] = a.get(i, j);
                vertex_b[i * nv + j] = b.get(i, j);
            }
        }
        let mut largest: f64 = 0.0;
        let mut chains = Vec::with_capacity(mesh.chains.len());
        for c in &mesh.chains {
            let n = c.interior_count();
            if n == 0 {
                continue;
            }
            let f = c.first_interior;
            let diag = ((0..n).map(|i| a.get(f + i, f + i)).collect(), (0..n).map(|i| b.get(f + i, f + i)).collect());
            let off: (Vec<f64>, Vec<f64>) =
                ((1..n).map(|i| a.get(f + i - 1, f + i)).collect(), (1..n).map(|i| b.get(f + i - 1, f + i)).collect());
            for v in off.0.iter().chain(&diag.0) {
                largest = largest.max(v.abs());
            }
            let couple = |v: Option<usize>, node: usize| v.map(|d| (d, a.get(d, node), b.get(d, node)));
            chains.push(ChainBlock {
                diag,
                off,
                left: couple(mesh.vertex_dof[c.start], f),
                right: couple(mesh.vertex_dof[c.end], f + n - 1),
            });
        }
        Pencil { nv, vertex_a, vertex_b, chains, pivmin: f64::MIN_POSITIVE * largest.max(1.0) * 1e20 }
    }

    /// Number of eigenvalues strictly below `sigma` (floating inertia).
    fn count_below(&self, sigma: f64) -> usize {
        let nv = self.nv;
        let mut s: Vec<f64> = self.vertex_a.iter().zip(&self.vertex_b).map(|(a, b)| a - sigma * b).collect();
        let mut negatives = 0;
        let mut forward = Vec::new();
        let guard = |d: f64| if d.abs() < self.pivmin { -self.pivmin } else { d };
        for c in &self.chains {
            let n = c.diag.0.len();
            let d = |i: usize| c.diag.0[i] - sigma * c.diag.1[i];
            let e = |i: usize| c.off.0[i] - sigma * c.off.1[i];
            forward.clear();
            let mut piv = guard(d(0));
            forward.push(piv);
            for i in 1..n {
                let ei = e(i - 1);
                piv = guard(d(i) - ei * ei / piv);
                forward.push(piv);
            }
            negatives += forward.iter().filter(|&&p| p < 0.0).count();

            let inv_nn = 1.0 / forward[n - 1];
            let mut back = guard(d(n - 1));
            for i in (0..n - 1).rev() {
                let ei = e(i);
                back = guard(d(i) - ei * ei / back);
            }
            let inv_11 = 1.0 / back;
            let mut inv_1n = inv_nn;
            for i in 0..n - 1 {
                inv_1n *= -e(i) / forward[i];
            }
            if !inv_1n.is_finite() {
                inv_1n = inv_1n.signum() * f64::MAX.sqrt();
            }
            if let Some((l, ca, cb)) = c.left {
                let cl = ca - sigma * cb;
                s[l * nv + l] -= cl * cl * inv_11;
                if let Some((r, ra, rb)) = c.right {
                    let cr = ra - sigma * rb;
                    let t = cl * cr * inv_1n;
                    s[l * nv + r] -= t;
                    s[r * nv + l] -= t;
                }
            }
            if let Some((r, ra, rb)) = c.right {
                let cr = ra - sigma * rb;
                s[r * nv + r] -= cr * cr * inv_nn;
            }
        }
        negatives + negative_inertia(&mut s, nv)
    }
}

fn check_request(system: &AssembledSystem, k: usize) -> Result<(), SolverError> {
    let n = system.dof_count();
    if k == 0 {
        return Err(SolverError::NoEigenpairs);
    }
    if n > MAX_DOFS {
        return Err(SolverError::Numeric(format!("{n} degrees of freedom exceed the limit of {MAX_DOFS}; coarsen the mesh")));
    }
    if k > n {
        return Err(SolverError::TooManyEigenpairs { requested: k, available: n });
    }
    Ok(())
}

/// Number of discrete eigenvalues strictly below `sigma`.
pub fn count_below(system: &AssembledSystem, sigma: f64) -> usize {
    let a = system.hamiltonian();
    Pencil::new(&system.mesh, &a, &system.mass).count_below(sigma)
}

/// All discrete eigenvalues strictly below `sigma`, ascending.
pub fn eigenvalues_below(system: &AssembledSystem, sigma: f64) -> Result<Vec<f64>, SolverError> {
    let k = count_below(system, sigma);
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut values = solve_eigenvalues(system, k)?;
    values.retain(|&e| e < sigma);
    Ok(values)
}

/// The `k` lowest eigenvalues, ascending, without eigenvectors.
pub fn solve_eigenvalues(system: &AssembledSystem, k: usize) -> Result<Vec<f64>, SolverError> {
    check_request(system, k)?;
    let a = system.hamiltonian();
    let pencil = Pencil::new(&system.mesh, &a, &system.mass);
    let n = system.dof_count();

    let vmin = system.min_nodal_potential();
    let mut lo = vmin - 1e-3 * (1.0 + vmin.abs());
    while pencil.count_below(lo) > 0 {
        lo -= 2.0 * (1.0 + lo.abs());
        if !lo.is_finite() {
            return Err(SolverError::Numeric("no lower spectral bound".into()));
        }
    }
    let mut hi = lo + 1.0;
    let mut c_hi = pencil.count_below(hi);
    while c_hi < k {
        hi = lo + 2.0 * (hi - lo);
        c_hi = pencil.count_below(hi);
        if !hi.is_finite() {
            return Err(SolverError::Numeric("no upper spectral bound".into()));
        }
    }
    let abs_tol = 4.0 * f64::EPSILON * lo.abs().max(hi.abs());
    let mut values = vec![f64::NAN; k];
    slice(&pencil, lo, 0, hi, c_hi.min(n), k, abs_tol, 0, &mut values);
    if values.iter().any(|v| !v.is_finite()) {
        return Err(SolverError::Numeric("bisection left eigenvalues unresolved".into()));
    }
    for i in 1..k {
        if values[i] < values[i - 1] {
            values[i] = values[i - 1];
        }
    }
    Ok(values)
}

#[allow(clippy::too_many_arguments)]
fn slice(p: &Pencil, lo: f64, c_lo: usize, hi: f64, c_hi: usize, k: usize, abs_tol: f64, depth: usize, out: &mut [f64]) {
    if c_lo >= c_hi || c_lo >= k {
        return;
    }
    let width = hi - lo;
    if width <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + abs_tol || depth > 200 {
        let mid = 0.5 * (lo + hi);
        for v in out.iter_mut().take(c_hi.min(k)).skip(c_lo) {
            *v = mid;
        }
        return;
    }
    let mid = 0.5 * (lo + hi);
    let c_mid = p.count_below(mid).clamp(c_lo, c_hi);
    slice(p, lo, c_lo, mid, c_mid, k, abs_tol, depth + 1, out);
    slice(p, mid, c_mid, hi, c_hi, k, abs_tol, depth + 1, out);
}

fn same_cluster(a: f64, b: f64, rel: f64, scale: f64) -> bool {
    (a - b).abs() <= rel * 0.5 * (a.abs() + b.abs()) + 1e-14 * scale
}

fn seeded_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0xD1B5_4A32_D192_ED03;
    (0..n)
        .map(|_| {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 + 0.5
        })
        .collect()
}

fn m_orthogonalize(x: &mut [f64], against: &[&Vec<f64>], mass: &SymmetricSparse) {
    for _ in 0..2 {
        for q in against {
            let c = mass.bilinear(q, x);
            for (xi, qi) in x.iter_mut().zip(q.iter()) {
                *xi -= c * qi;
            }
        }
    }
}

fn m_normalize(x: &mut [f64], mass: &SymmetricSparse) -> f64 {
    let norm = mass.quad_form(x).max(0.0).sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    norm
}

fn fix_sign(x: &mut [f64]) {
    let max = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some(first) = x.iter().find(|v| v.abs() > 1e-8 * max) {
        if *first < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

/// The `k` lowest eigenpairs with per-edge functionals.
pub fn solve_spectrum(system: &AssembledSystem, k: usize) -> Result<Spectrum, SolverError> {
    let eigenvalues = solve_eigenvalues(system, k)?;
    let a = system.hamiltonian();
    let mass = &system.mass;
    let n = system.dof_count();
    let order = reverse_cuthill_mckee(&a);
    let scale = eigenvalues.iter().fold(1.0f64, |m, v| m.max(v.abs()));

    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut start = 0;
    while start < k {
        let mut end = start + 1;
        while end < k && same_cluster(eigenvalues[end - 1], eigenvalues[end], DEGENERACY_TOL, scale) {
            end += 1;
        }
        let sigma = eigenvalues[start];
        let lu = BandedLu::factor(&a.combine(1.0, mass, -sigma), &order);
        let nearby: Vec<usize> =
            (0..start).filter(|&j| same_cluster(eigenvalues[j], eigenvalues[start], 1e-6, scale)).collect();

        let mut block: Vec<Vec<f64>> = (start..end).map(|j| seeded_vector(n, j as u64 + 1)).collect();
        for _ in 0..12 {
            let mut next = Vec::with_capacity(block.len());
            for x in &block {
                let rhs = mass.mul_vec(x);
                let mut permuted: Vec<f64> = order.iter().map(|&o| rhs[o]).collect();
                lu.solve_in_place(&mut permuted);
                let mut y = vec![0.0; n];
                for (new, &old) in order.iter().enumerate() {
                    y[old] = permuted[new];
                }
                next.push(y);
            }
            for i in 0..next.len() {
                let (done, rest) = next.split_at_mut(i);
                let y = &mut rest[0];
                let mut against: Vec<&Vec<f64>> = nearby.iter().map(|&j| &vectors[j]).collect();
                against.extend(done.iter());
                m_orthogonalize(y, &against, mass);
                if m_normalize(y, mass) == 0.0 {
                    return Err(SolverError::Numeric("inverse iteration collapsed".into()));
                }
            }
            block = next;
            let worst = block
                .iter()
                .zip(&eigenvalues[start..end])
                .map(|(x, &lambda)| relative_residual(&a, mass, x, lambda))
                .fold(0.0, f64::max);
            if worst < 1e-11 {
                break;
            }
        }
        for (x, &lambda) in block.iter().zip(&eigenvalues[start..end]) {
            let r = relative_residual(&a, mass, x, lambda);
            if !(r < 1e-6) {
                return Err(SolverError::Numeric(format!("eigenvector for {lambda} did not converge (residual {r:e})")));
            }
        }
        for mut x in block {
            fix_sign(&mut x);
            vectors.push(x);
        }
        start = end;
    }

    let (edge_mass, edge_dirichlet) = per_edge_functionals(&system.mesh, &vectors);
    Ok(Spectrum { eigenvalues, eigenvectors: vectors, edge_mass, edge_dirichlet })
}

fn relative_residual(a: &SymmetricSparse, b: &SymmetricSparse, x: &[f64], lambda: f64) -> f64 {
    let ax = a.mul_vec(x);
    let bx = b.mul_vec(x);
    let norm = |v: &[f64]| v.iter().map(|t| t * t).sum::<f64>().sqrt();
    let r: Vec<f64> = ax.iter().zip(&bx).map(|(p, q)| p - lambda * q).collect();
    norm(&r) / (norm(&ax) + lambda.abs() * norm(&bx)).max(f64::MIN_POSITIVE)
}

/// Per-edge `‖χ_m φ_j‖²` and `‖χ_m φ_j′‖²` by restricting the element
/// mass and (α-free) stiffness forms to each original edge.
pub fn per_edge_functionals(mesh: &Mesh, vectors: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let mut mass = vec![vec![0.0; mesh.edge_count]; vectors.len()];
    let mut dirichlet = vec![vec![0.0; mesh.edge_count]; vectors.len()];
    for (j, x) in vectors.iter().enumerate() {
        for c in &mesh.chains {
            let h = c.h();
            let u = mesh.chain_values(c, x);
            for w in u.windows(2) {
                let (p, q) = (w[0], w[1]);
                mass[j][c.edge.0] += h / 3.0 * (p * p + p * q + q * q);
                dirichlet[j][c.edge.0] += (q - p) * (q - p) / h;
            }
        }
    }
    (mass, dirichlet)
}

/// Arclength/value samples of one eigenfunction on every edge, measured
/// from the edge's `from` end.
pub fn eigenfunction_samples(mesh: &Mesh, x: &[f64]) -> Vec<(EdgeId, Vec<(f64, f64)>)> {
    let mut out: Vec<(EdgeId, Vec<(f64, f64)>)> = Vec::new();
    for c in &mesh.chains {
        let values = mesh.chain_values(c, x);
        let points = (0..=c.cells).map(|i| (c.node_position(i), values[i]));
        match out.last_mut() {
            // second half of a loop continues the first
            Some((e, pts)) if *e == c.edge => pts.extend(points.skip(1)),
            _ => out.push((c.edge, points.collect())),
        }
    }
    out
}

/// Sum of outward one-sided difference quotients at every graph vertex of
/// degree at least two. Tends to zero with the mesh size for true
/// eigenfunctions.
pub fn kirchhoff_residuals(graph: &MetricGraph, mesh: &Mesh, x: &[f64]) -> Vec<(VertexId, f64)> {
    let degrees = graph.degrees();
    let mut sums = vec![0.0; graph.vertex_count()];
    for c in &mesh.chains {
        let values = mesh.chain_values(c, x);
        let h = c.h();
        if c.start < sums.len() {
            sums[c.start] += (values[1] - values[0]) / h;
        }
        if c.end < sums.len() {
            sums[c.end] += (values[c.cells - 1] - values[c.cells]) / h;
        }
    }
    graph.vertices().filter(|v| degrees[v.0] >= 2).map(|v| (v, sums[v.0])).collect()
}

/// Mesh, assemble and solve in one call.
pub fn solve_graph(graph: &MetricGraph, target_h: f64, k: usize) -> Result<(AssembledSystem, Spectrum), SolverError> {
    let mesh = crate::fem::mesh::build_mesh(graph, target_h)?;
    let system = crate::fem::assemble::assemble(&mesh, graph);
    let spectrum = solve_spectrum(&system, k)?;
    Ok((system, spectrum))
}

/// Eigenvalues only, for sweeps.
pub fn graph_eigenvalues(graph: &MetricGraph, target_h: f64, k: usize) -> Result<Vec<f64>, SolverError> {
    let mesh = crate::fem::mesh::build_mesh(graph, target_h)?;
    let system = crate::fem::assemble::assemble(&mesh, graph);
    solve_eigenvalues(&system, k)
}
