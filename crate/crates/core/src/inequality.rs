//! Eigenvalue inequalities evaluated on computed or closed-form spectra.
//!
//! Every check returns an [`InequalityReport`] whose margins are
//! normalized slacks: nonnegative where the inequality holds, and a check
//! fails only once a margin drops below `-tol`.

use crate::analytic::classical_constant;
use crate::error::{CheckError, SolverError};
use crate::fem::{assemble, build_mesh, eigenvalues_below, AssembledSystem, Spectrum};
use crate::graph::{MetricGraph, PotentialSpec, TopologyClass};
use crate::quadrature::adaptive_simpson;
use crate::report::InequalityReport;

/// Slack allowed for theorem-backed signs on closed-form spectra.
pub const ANALYTIC_TOL: f64 = 1e-6;
/// Slack allowed for theorem-backed signs on finite-element spectra.
pub const FEM_TOL: f64 = 1e-3;

pub fn riesz_mean(eigenvalues: &[f64], z: f64, rho: f64) -> f64 {
    eigenvalues.iter().filter(|&&e| e < z).map(|&e| (z - e).powf(rho)).sum()
}

/// `ind(z)`: number of eigenvalues at or below `z`.
pub fn index_at(eigenvalues: &[f64], z: f64) -> usize {
    eigenvalues.iter().filter(|&&e| e <= z).count()
}

/// How many of `n` computed FEM eigenvalues are trusted for grids.
pub fn trusted_count(n: usize) -> usize {
    (2 * n / 3).max(1)
}

pub fn geometric_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![hi];
    }
    let ratio = (hi / lo).powf(1.0 / (points - 1) as f64);
    (0..points).map(|i| if i + 1 == points { hi } else { lo * ratio.powi(i as i32) }).collect()
}

pub fn linear_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![hi];
    }
    (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect()
}

/// Eigenvalues whose wavenumber `√(E/α)` stays below `0.5/h`, where P1
/// elements of size `h` still resolve the mode well.
pub fn resolved_count(eigenvalues: &[f64], alpha: f64, h: f64) -> usize {
    eigenvalues.iter().take_while(|&&e| (e.max(0.0) / alpha).sqrt() * h <= 0.5).count()
}

/// Leading eigenvalues that grids may reach: two thirds of those computed,
/// cut further to the well-resolved ones.
pub fn trusted_eigenvalues(eigenvalues: &[f64], alpha: f64, h: f64) -> &[f64] {
    let n = trusted_count(eigenvalues.len()).min(resolved_count(eigenvalues, alpha, h)).max(1);
    &eigenvalues[..n]
}

/// Geometric grid from `E_1/2` to the last of `trusted`; linear from just
/// above `E_1` when `E_1 <= 0`.
pub fn default_z_grid(trusted: &[f64], points: usize) -> Vec<f64> {
    let top = trusted[trusted.len() - 1];
    let e1 = trusted[0];
    if e1 > 0.0 && top > e1 {
        geometric_grid(0.5 * e1, top, points)
    } else {
        let lo = e1 + 1e-3 * (top - e1).max(e1.abs());
        linear_grid(lo, top.max(lo), points)
    }
}

fn require_coverage(eigenvalues: &[f64], zs: &[f64]) -> Result<(), CheckError> {
    let needed = zs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let available = eigenvalues.last().copied().unwrap_or(f64::NEG_INFINITY);
    if needed > available {
        return Err(CheckError::Coverage { needed, available });
    }
    Ok(())
}

/// `S(z) = Σ (z-E_j)₊² - 4 α w (z-E_j)₊ ‖φ_j′‖²`; `w = 1` is the sharp form.
pub fn yang_functional(eigenvalues: &[f64], gradients: &[f64], alpha: f64, weight: f64, z: f64) -> f64 {
    eigenvalues
        .iter()
        .zip(gradients)
        .filter(|(&e, _)| e < z)
        .map(|(&e, &g)| (z - e).powi(2) - 4.0 * alpha * weight * (z - e) * g)
        .sum()
}

/// Sharp Yang-type inequality `S(z) <= 0` on every grid point.
pub fn yang_check(
    eigenvalues: &[f64],
    gradients: &[f64],
    alpha: f64,
    zs: &[f64],
    tol: f64,
) -> Result<InequalityReport, CheckError> {
    weak_yang_check(eigenvalues, gradients, alpha, 1.0, zs, tol).map(|mut r| {
        r.check = "yang".into();
        r
    })
}

/// Yang-type inequality with the gradient term weighted by
/// `ratio = a_max / a_min`.
pub fn weak_yang_check(
    eigenvalues: &[f64],
    gradients: &[f64],
    alpha: f64,
    ratio: f64,
    zs: &[f64],
    tol: f64,
) -> Result<InequalityReport, CheckError> {
    require_coverage(eigenvalues, zs)?;
    let s: Vec<f64> = zs.iter().map(|&z| yang_functional(eigenvalues, gradients, alpha, ratio, z)).collect();
    let margins: Vec<f64> = zs
        .iter()
        .zip(&s)
        .map(|(&z, &v)| -v / (z * z).max(riesz_mean(eigenvalues, z, 2.0)).max(f64::MIN_POSITIVE))
        .collect();
    Ok(InequalityReport::new("weak_yang", zs.to_vec())
        .param("alpha", alpha)
        .param("ratio", ratio)
        .column("s", s)
        .column("index", zs.iter().map(|&z| index_at(eigenvalues, z) as f64).collect())
        .judge(&margins, tol))
}

/// `∫ (V - w)₋^p` over the whole graph: closed form for zero and square-well
/// potentials, adaptive quadrature otherwise.
pub fn shifted_negative_integral(graph: &MetricGraph, w: f64, p: f64) -> f64 {
    let neg = |v: f64| if v < w { (w - v).powf(p) } else { 0.0 };
    graph
        .edges()
        .iter()
        .map(|e| match &e.potential {
            PotentialSpec::Zero => neg(0.0) * e.length,
            PotentialSpec::SquareWell { depth, left, right } => {
                let inside = (right.min(e.length) - left.max(0.0)).max(0.0);
                neg(-depth) * inside + neg(0.0) * (e.length - inside)
            }
            other => adaptive_simpson(&|s: f64| neg(other.eval(s, e.length)), 0.0, e.length, 1e-12),
        })
        .sum()
}

/// `∫ (V - w)₋^p` by the composite trapezoid rule on the mesh nodes.
pub fn shifted_negative_trapezoid(system: &AssembledSystem, w: f64, p: f64) -> f64 {
    let neg = |v: f64| if v < w { (w - v).powf(p) } else { 0.0 };
    system
        .mesh
        .chains
        .iter()
        .zip(&system.nodal_potential)
        .map(|(c, v)| c.h() * v.windows(2).map(|x| 0.5 * (neg(x[0]) + neg(x[1]))).sum::<f64>())
        .sum()
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct LtQuotient {
    pub gamma: f64,
    /// `Σ|E_j|^γ / ∫V₋^{γ+1/2}` with the trapezoid denominator.
    pub quotient: f64,
    /// Same with the closed-form or adaptive denominator.
    pub quotient_reference: f64,
    pub numerator: f64,
    pub denominator_trapezoid: f64,
    pub denominator_reference: f64,
    pub classical: f64,
    pub exceeds_classical: bool,
    pub notes: Vec<String>,
}

impl LtQuotient {
    /// Report comparing the quotient with the classical constant; the
    /// margin is `(L^cl - Q) / L^cl`.
    pub fn report(&self, expect_violation: bool, tol: f64) -> InequalityReport {
        let margin = (self.classical - self.quotient) / self.classical;
        let mut r = InequalityReport::new(&format!("lt_quotient_gamma_{}", self.gamma), vec![self.gamma])
            .param("gamma", self.gamma)
            .param("classical", self.classical)
            .column("quotient", vec![self.quotient])
            .column("quotient_reference", vec![self.quotient_reference])
            .column("numerator", vec![self.numerator])
            .column("denominator_trapezoid", vec![self.denominator_trapezoid])
            .column("denominator_reference", vec![self.denominator_reference])
            .judge(&[margin], tol);
        r.notes.extend(self.notes.iter().cloned());
        if expect_violation {
            r = r.expecting_violation();
        }
        r
    }
}

/// Lieb–Thirring quotient over the negative eigenvalues, `γ ∈ {3/2, 2}`.
pub fn lt_quotient(negative: &[f64], system: &AssembledSystem, graph: &MetricGraph, gamma: f64) -> Result<LtQuotient, CheckError> {
    if gamma != 1.5 && gamma != 2.0 {
        return Err(CheckError::Precondition(format!("moment order 3/2 or 2, got {gamma}")));
    }
    if !graph.has_potential() {
        return Err(CheckError::Precondition("a potential with a negative part".into()));
    }
    let numerator: f64 = negative.iter().filter(|&&e| e < 0.0).map(|e| e.abs().powf(gamma)).sum();
    let denominator_trapezoid = shifted_negative_trapezoid(system, 0.0, gamma + 0.5);
    let denominator_reference = shifted_negative_integral(graph, 0.0, gamma + 0.5);
    let classical = classical_constant(gamma);
    let mut notes = Vec::new();
    if numerator == 0.0 {
        notes.push("no negative eigenvalues; quotient is 0".to_string());
    }
    let quotient = if denominator_trapezoid > 0.0 { numerator / denominator_trapezoid } else { 0.0 };
    let quotient_reference = if denominator_reference > 0.0 { numerator / denominator_reference } else { 0.0 };
    Ok(LtQuotient {
        gamma,
        quotient,
        quotient_reference,
        numerator,
        denominator_trapezoid,
        denominator_reference,
        classical,
        exceeds_classical: quotient > classical,
        notes,
    })
}

/// Negative eigenvalues of the graph on a mesh of spacing `h`.
pub fn negative_eigenvalues(graph: &MetricGraph, h: f64) -> Result<Vec<f64>, SolverError> {
    let mesh = build_mesh(graph, h)?;
    eigenvalues_below(&assemble(&mesh, graph), 0.0)
}

/// `α^{1/2} Σ (-E_j(α))₊²` from the negative eigenvalues at each `α`.
pub fn stubbe_values(alphas: &[f64], negatives: &[Vec<f64>]) -> Vec<f64> {
    alphas
        .iter()
        .zip(negatives)
        .map(|(a, es)| a.sqrt() * es.iter().filter(|&&e| e < 0.0).map(|e| e * e).sum::<f64>() + 0.0)
        .collect()
}

/// Monotonicity in `α` and the classical bound `L^cl_{2,1} ∫V₋^{5/2}`.
pub fn stubbe_report(alphas: &[f64], values: &[f64], classical_bound: f64, tol: f64) -> Result<InequalityReport, CheckError> {
    if alphas.len() < 3 || alphas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CheckError::Precondition("an ascending α grid with at least 3 points".into()));
    }
    let mut margins = Vec::new();
    let mut step = vec![0.0];
    for w in values.windows(2) {
        let scale = w[0].max(w[1]);
        let m = if scale > 0.0 { (w[0] - w[1]) / scale } else { 0.0 };
        step.push(m);
        margins.push(m);
    }
    let bound: Vec<f64> = values
        .iter()
        .map(|v| if classical_bound > 0.0 { (classical_bound - v) / classical_bound } else if *v == 0.0 { 0.0 } else { -1.0 })
        .collect();
    margins.extend(bound.iter().copied());
    Ok(InequalityReport::new("stubbe_monotonicity", alphas.to_vec())
        .param("classical_bound", classical_bound)
        .column("value", values.to_vec())
        .column("decrease_margin", step)
        .column("bound_margin", bound)
        .judge(&margins, tol))
}

pub fn stubbe_monotonicity(graph: &MetricGraph, alphas: &[f64], h: f64, tol: f64) -> Result<InequalityReport, CheckError> {
    let negatives =
        alphas.iter().map(|&a| negative_eigenvalues(&graph.with_alpha(a), h)).collect::<Result<Vec<_>, _>>()?;
    let values = stubbe_values(alphas, &negatives);
    let bound = classical_constant(2.0) * shifted_negative_integral(graph, 0.0, 2.5);
    stubbe_report(alphas, &values, bound, tol)
}

/// Leads and semicircles of a circle with two leads at antipodal points.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopGeometry {
    pub lead_edges: Vec<usize>,
    pub loop_edges: Vec<usize>,
    /// Length of each of the two arcs between the attachment points.
    pub semicircle: f64,
    /// `2π / semicircle`.
    pub q: f64,
}

fn is_bridge(graph: &MetricGraph, skip: usize) -> bool {
    let n = graph.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, e) in graph.edges().iter().enumerate() {
        if i != skip {
            let (a, b) = (find(&mut parent, e.from.0), find(&mut parent, e.to.0));
            parent[a] = b;
        }
    }
    let e = &graph.edges()[skip];
    find(&mut parent, e.from.0) != find(&mut parent, e.to.0)
}

pub fn loop_geometry(graph: &MetricGraph) -> Result<LoopGeometry, CheckError> {
    let topology = graph.classify_topology();
    if topology.class != TopologyClass::OneLoopWithLeads {
        return Err(CheckError::Topology { expected: "one loop with leads".into(), found: format!("{:?}", topology.class) });
    }
    let (mut lead_edges, mut loop_edges) = (Vec::new(), Vec::new());
    for i in 0..graph.edge_count() {
        if is_bridge(graph, i) {
            lead_edges.push(i);
        } else {
            loop_edges.push(i);
        }
    }
    let mismatch = |why: &str| CheckError::Topology { expected: "two leads at antipodal loop points".into(), found: why.into() };
    let degrees = graph.degrees();
    let mut on_loop: Vec<usize> = loop_edges.iter().flat_map(|&i| [graph.edges()[i].from.0, graph.edges()[i].to.0]).collect();
    on_loop.sort_unstable();
    on_loop.dedup();
    let attachments: Vec<usize> = on_loop.iter().copied().filter(|&v| degrees[v] > 2).collect();
    if attachments.len() != 2 {
        return Err(mismatch(&format!("{} attachment points on the loop", attachments.len())));
    }
    // walk the cycle from one attachment point and measure both arcs
    let start = attachments[0];
    let mut arcs = Vec::new();
    let mut used = vec![false; graph.edge_count()];
    for _ in 0..2 {
        let (mut at, mut length) = (start, 0.0);
        loop {
            let next = loop_edges.iter().copied().find(|&i| {
                let e = &graph.edges()[i];
                !used[i] && (e.from.0 == at || e.to.0 == at)
            });
            let Some(i) = next else { return Err(mismatch("loop is not a simple cycle")) };
            used[i] = true;
            let e = &graph.edges()[i];
            length += e.length;
            at = if e.from.0 == at { e.to.0 } else { e.from.0 };
            if attachments.contains(&at) {
                break;
            }
        }
        arcs.push(length);
    }
    if (arcs[0] - arcs[1]).abs() > 1e-9 * arcs[0] {
        return Err(mismatch(&format!("arcs of length {} and {}", arcs[0], arcs[1])));
    }
    let semicircle = arcs[0];
    Ok(LoopGeometry { lead_edges, loop_edges, semicircle, q: 2.0 * std::f64::consts::PI / semicircle })
}

/// Shifted one-loop inequalities on an `(α, z)` grid: the map
/// `α ↦ α^{1/2} Σ_{E_j<0} (z - (3/16)αq² - E_j)₊²` is nonincreasing, and
/// `R_2(z, α) <= α^{-1/2} L^cl_{2,1} ∫ (V - z - (3/16)q²α)₋^{5/2}`.
pub fn one_loop_shifted_check(
    graph: &MetricGraph,
    alphas: &[f64],
    zs: &[f64],
    h: f64,
    tol: f64,
) -> Result<InequalityReport, CheckError> {
    let geometry = loop_geometry(graph)?;
    if alphas.windows(2).any(|w| w[1] <= w[0]) || alphas.is_empty() || zs.is_empty() {
        return Err(CheckError::Precondition("nonempty grids with ascending α".into()));
    }
    let shift = 3.0 / 16.0 * geometry.q * geometry.q;
    let top = zs.iter().copied().fold(0.0f64, f64::max);
    let mesh = build_mesh(graph, h)?;
    let spectra = alphas
        .iter()
        .map(|&a| {
            let g = graph.with_alpha(a);
            eigenvalues_below(&assemble(&mesh, &g), top)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let lcl = classical_constant(2.0);

    let (mut grid, mut alpha_col, mut mono, mut r2, mut rhs, mut margins) =
        (Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut mono_margin = Vec::new();
    let mut bound_margin = Vec::new();
    for &z in zs {
        let mut previous: Option<f64> = None;
        for (&a, es) in alphas.iter().zip(&spectra) {
            let w = z - shift * a;
            let u = a.sqrt() * es.iter().filter(|&&e| e < 0.0).map(|&e| (w - e).max(0.0).powi(2)).sum::<f64>();
            let r = riesz_mean(es, z, 2.0);
            let bound = lcl / a.sqrt() * shifted_negative_integral(graph, z + shift * a, 2.5);
            let m_mono = match previous {
                Some(p) if p.max(u) > 0.0 => (p - u) / p.max(u),
                _ => 0.0,
            };
            let m_bound = if bound.max(r) > 0.0 { (bound - r) / bound.max(r) } else { 0.0 };
            previous = Some(u);
            grid.push(z);
            alpha_col.push(a);
            mono.push(u);
            r2.push(r);
            rhs.push(bound);
            mono_margin.push(m_mono);
            bound_margin.push(m_bound);
            margins.push(m_mono);
            margins.push(m_bound);
        }
    }
    Ok(InequalityReport::new("one_loop_shifted", grid)
        .param("q", geometry.q)
        .param("semicircle", geometry.semicircle)
        .param("h", h)
        .column("alpha", alpha_col)
        .column("shifted_moment", mono)
        .column("monotone_margin", mono_margin)
        .column("r2", r2)
        .column("lt_bound", rhs)
        .column("bound_margin", bound_margin)
        .judge(&margins, tol))
}

/// The two intermediate inequalities of the one-loop argument at a single
/// `z`, summed over `J = {E_j < z}`: the lead-weighted Yang form (leads
/// weighted 4, loop weighted 1) must be `<= 0`, and
/// `Σ (z-E)² p₃₄ <= α Σ (z-E)(q² p₃₄ + 4 p′₃₄)`.
pub fn sum_rule_steps_check(
    spectrum: &Spectrum,
    graph: &MetricGraph,
    z: f64,
    tol: f64,
) -> Result<InequalityReport, CheckError> {
    let geometry = loop_geometry(graph)?;
    require_coverage(&spectrum.eigenvalues, &[z])?;
    let alpha = graph.alpha();
    let q2 = geometry.q * geometry.q;
    let sum_over = |edges: &[usize], table: &[Vec<f64>], j: usize| edges.iter().map(|&m| table[j][m]).sum::<f64>();

    let (mut weighted, mut weighted_scale, mut per_lhs, mut per_rhs) = (0.0, 0.0, 0.0, 0.0);
    for (j, &e) in spectrum.eigenvalues.iter().enumerate() {
        if e >= z {
            continue;
        }
        let d = z - e;
        let p12 = sum_over(&geometry.lead_edges, &spectrum.edge_mass, j);
        let p34 = sum_over(&geometry.loop_edges, &spectrum.edge_mass, j);
        let dp12 = sum_over(&geometry.lead_edges, &spectrum.edge_dirichlet, j);
        let dp34 = sum_over(&geometry.loop_edges, &spectrum.edge_dirichlet, j);
        weighted += 4.0 * (d * d * p12 - 4.0 * alpha * d * dp12) + d * d * p34 - 4.0 * alpha * d * dp34;
        weighted_scale += d * d * (4.0 * p12 + p34);
        per_lhs += d * d * p34;
        per_rhs += alpha * d * (q2 * p34 + 4.0 * dp34);
    }
    let m_weighted = if weighted_scale > 0.0 { -weighted / weighted_scale } else { 0.0 };
    let m_per = if per_lhs.max(per_rhs) > 0.0 { (per_rhs - per_lhs) / per_lhs.max(per_rhs) } else { 0.0 };
    Ok(InequalityReport::new("sum_rule_steps", vec![z])
        .param("alpha", alpha)
        .param("q", geometry.q)
        .column("weighted_lhs", vec![weighted])
        .column("loop_lhs", vec![per_lhs])
        .column("loop_rhs", vec![per_rhs])
        .column("weighted_margin", vec![m_weighted])
        .column("loop_margin", vec![m_per])
        .judge(&[m_weighted, m_per], tol))
}

/// Means `Ē_j` and `Ē²_j` for `j = 1..=n`.
pub fn eigenvalue_means(eigenvalues: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let (mut s, mut s2) = (0.0, 0.0);
    let mut means = Vec::with_capacity(eigenvalues.len());
    let mut squares = Vec::with_capacity(eigenvalues.len());
    for (i, e) in eigenvalues.iter().enumerate() {
        s += e;
        s2 += e * e;
        means.push(s / (i + 1) as f64);
        squares.push(s2 / (i + 1) as f64);
    }
    (means, squares)
}

fn require_dirichlet_tree(graph: &MetricGraph) -> Result<(), CheckError> {
    let class = graph.classify_topology().class;
    if class != TopologyClass::Tree {
        return Err(CheckError::Topology { expected: "tree".into(), found: format!("{class:?}") });
    }
    if graph.has_potential() {
        return Err(CheckError::Precondition("a vanishing potential".into()));
    }
    Ok(())
}

/// Riesz-mean inequalities for the Dirichlet Laplacian on a tree with
/// total length `total_length`: one report per family of inequalities.
pub fn riesz_suite(
    eigenvalues: &[f64],
    total_length: f64,
    zs: &[f64],
    js: &[usize],
    tol: f64,
) -> Result<Vec<InequalityReport>, CheckError> {
    require_coverage(eigenvalues, zs)?;
    let e1 = eigenvalues[0];
    if !(e1 > 0.0) {
        return Err(CheckError::Precondition("a positive spectrum".into()));
    }
    let r1: Vec<f64> = zs.iter().map(|&z| riesz_mean(eigenvalues, z, 1.0)).collect();
    let r2: Vec<f64> = zs.iter().map(|&z| riesz_mean(eigenvalues, z, 2.0)).collect();
    let scaled: Vec<f64> = zs.iter().zip(&r2).map(|(z, r)| r / z.powf(2.5)).collect();
    let mut reports = Vec::new();

    let difference: Vec<f64> = zs
        .iter()
        .zip(r1.iter().zip(&r2))
        .map(|(&z, (&a, &b))| if a > 0.0 { (a - 1.25 * b / z) / a } else { 0.0 })
        .collect();
    reports.push(
        InequalityReport::new("riesz_difference", zs.to_vec())
            .column("r1", r1.clone())
            .column("r2", r2.clone())
            .column("margin", difference.clone())
            .judge(&difference, tol),
    );

    let mut growth = vec![0.0];
    for w in scaled.windows(2) {
        growth.push(if w[1] > 0.0 { (w[1] - w[0]) / w[1] } else { 0.0 });
    }
    reports.push(
        InequalityReport::new("riesz_scaled_monotone", zs.to_vec())
            .column("r2_over_z52", scaled.clone())
            .column("margin", growth.clone())
            .judge(&growth, tol),
    );

    let lcl = classical_constant(2.0);
    let (mut lower, mut upper) = (Vec::new(), Vec::new());
    for (&z, &r) in zs.iter().zip(&r2) {
        let ub = lcl * total_length * z.powf(2.5);
        upper.push((ub - r) / ub);
        if z >= 5.0 * e1 {
            let lb = 16.0 / e1.sqrt() * (z / 5.0).powf(2.5);
            lower.push((r - lb) / r.max(lb));
        } else {
            lower.push(0.0);
        }
    }
    let both: Vec<f64> = lower.iter().chain(&upper).copied().collect();
    reports.push(
        InequalityReport::new("riesz_two_sided", zs.to_vec())
            .param("total_length", total_length)
            .column("lower_margin", lower)
            .column("upper_margin", upper)
            .judge(&both, tol),
    );

    let (means, squares) = eigenvalue_means(eigenvalues);
    let mut mean_bounds = Vec::new();
    let mut rows = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for &j in js {
        if j == 0 || j > eigenvalues.len() {
            return Err(CheckError::Coverage { needed: j as f64, available: eigenvalues.len() as f64 });
        }
        let m = means[j - 1];
        for (i, &z) in zs.iter().enumerate() {
            if z < 5.0 * m {
                continue;
            }
            let b2 = 16.0 * j as f64 * z.powf(2.5) / (25.0 * (5.0 * m).sqrt());
            let b1 = 4.0 * j as f64 * z.powf(1.5) / (5.0 * (5.0 * m).sqrt());
            let m2 = (r2[i] - b2) / r2[i].max(b2);
            let m1 = (r1[i] - b1) / r1[i].max(b1);
            mean_bounds.push(m2);
            mean_bounds.push(m1);
            rows.0.push(j as f64);
            rows.1.push(z);
            rows.2.push(m2);
            rows.3.push(m1);
        }
    }
    reports.push(
        InequalityReport::new("riesz_mean_bounds", rows.1)
            .column("j", rows.0)
            .column("r2_margin", rows.2)
            .column("r1_margin", rows.3)
            .judge(&mean_bounds, tol),
    );

    let mut disc_margins = Vec::new();
    let (mut dj, mut z0s) = (Vec::new(), Vec::new());
    for &j in js {
        let (m, m2) = (means[j - 1], squares[j - 1]);
        let d = 9.0 * m * m - 5.0 * m2;
        let z0 = 3.0 * m + d.max(0.0).sqrt();
        disc_margins.push(d / (9.0 * m * m));
        disc_margins.push((5.0 * m - z0) / (5.0 * m));
        dj.push(d);
        z0s.push(z0);
    }
    reports.push(
        InequalityReport::new("riesz_discriminant", js.iter().map(|&j| j as f64).collect())
            .column("discriminant", dj)
            .column("z0", z0s)
            .judge(&disc_margins, tol),
    );
    Ok(reports)
}

/// [`riesz_suite`] with the tree and potential preconditions checked.
pub fn riesz_suite_for_graph(
    graph: &MetricGraph,
    eigenvalues: &[f64],
    zs: &[f64],
    js: &[usize],
    tol: f64,
) -> Result<Vec<InequalityReport>, CheckError> {
    require_dirichlet_tree(graph)?;
    riesz_suite(eigenvalues, graph.total_length(), zs, js, tol)
}

/// All pairs `1 <= j <= k <= k_max`.
pub fn mean_ratio_pairs(k_max: usize) -> Vec<(usize, usize)> {
    (1..=k_max).flat_map(|k| (1..=k).map(move |j| (j, k))).collect()
}

/// `Ē_k/Ē_j <= (125/108)(k/j)²` for `k >= 6j/5` and `<= (5/3)(k/j)²` for
/// `k >= j`.
pub fn mean_ratio_bounds(eigenvalues: &[f64], pairs: &[(usize, usize)], tol: f64) -> Result<InequalityReport, CheckError> {
    let (means, _) = eigenvalue_means(eigenvalues);
    let mut cols = (Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut margins = Vec::new();
    for &(j, k) in pairs {
        if k > eigenvalues.len() || j == 0 || j > k {
            return Err(CheckError::Coverage { needed: k as f64, available: eigenvalues.len() as f64 });
        }
        let ratio = means[k - 1] / means[j - 1];
        let kj2 = (k as f64 / j as f64).powi(2);
        let five_thirds = 5.0 / 3.0 * kj2;
        margins.push((five_thirds - ratio) / five_thirds);
        let sharp = if 5 * k >= 6 * j {
            let b = 125.0 / 108.0 * kj2;
            margins.push((b - ratio) / b);
            b
        } else {
            f64::NAN
        };
        cols.0.push(j as f64);
        cols.1.push(k as f64);
        cols.2.push(ratio);
        cols.3.push(sharp);
        cols.4.push(five_thirds);
    }
    Ok(InequalityReport::new("mean_ratio", (0..pairs.len()).map(|i| i as f64).collect())
        .column("j", cols.0)
        .column("k", cols.1)
        .column("ratio", cols.2)
        .column("bound_125_108", cols.3)
        .column("bound_5_3", cols.4)
        .judge(&margins, tol))
}

/// `√E_n |Γ| / (nπ)` at each `n`; the verdict uses the largest `n` only,
/// which must fall within `1 ± band`.
pub fn weyl_check(eigenvalues: &[f64], total_length: f64, ns: &[usize], band: f64) -> Result<InequalityReport, CheckError> {
    if eigenvalues.len() < 50 {
        return Err(CheckError::Precondition(format!("at least 50 eigenvalues, got {}", eigenvalues.len())));
    }
    let ns: Vec<usize> = ns.iter().copied().filter(|&n| n >= 1 && n <= eigenvalues.len()).collect();
    let Some(&last) = ns.last() else {
        return Err(CheckError::Precondition("an index within the computed spectrum".into()));
    };
    let ratios: Vec<f64> = ns
        .iter()
        .map(|&n| eigenvalues[n - 1].sqrt() * total_length / (n as f64 * std::f64::consts::PI))
        .collect();
    let final_ratio = eigenvalues[last - 1].sqrt() * total_length / (last as f64 * std::f64::consts::PI);
    Ok(InequalityReport::new("weyl", ns.iter().map(|&n| n as f64).collect())
        .param("total_length", total_length)
        .param("band", band)
        .column("ratio", ratios)
        .judge(&[band - (final_ratio - 1.0).abs()], 0.0))
}
