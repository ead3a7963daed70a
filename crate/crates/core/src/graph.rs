//! Finite metric graphs with Kirchhoff vertex conditions.
//!
//! A [`MetricGraph`] is the single description every solver and check reads
//! from: the combinatorial graph, positive edge lengths, end-point boundary
//! conditions and a potential per edge. Per-edge arclength is always measured
//! from the edge's `from` vertex.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// Condition at a free end (degree-1 vertex). Interior vertices always
/// carry Kirchhoff conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

/// Potential on one edge, as a function of arclength `s` from the `from` end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "PotentialRepr", into = "PotentialRepr")]
pub enum PotentialSpec {
    Zero,
    /// `-2a^2 / cosh^2(a (s - center))`
    PoschlTeller { a: f64, center: f64 },
    /// `-depth` on `[left, right]`, zero elsewhere.
    SquareWell { depth: f64, left: f64, right: f64 },
    /// Values at uniformly spaced arclength points covering the whole edge,
    /// linearly interpolated in between.
    Sampled { values: Vec<f64> },
}

// Wire form. `Zero` is a struct variant here so that stray keys next to
// `"type": "zero"` are rejected like everywhere else.
#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum PotentialRepr {
    Zero {},
    PoschlTeller { a: f64, center: f64 },
    SquareWell { depth: f64, left: f64, right: f64 },
    Sampled { values: Vec<f64> },
}

impl From<PotentialRepr> for PotentialSpec {
    fn from(r: PotentialRepr) -> Self {
        match r {
            PotentialRepr::Zero {} => PotentialSpec::Zero,
            PotentialRepr::PoschlTeller { a, center } => PotentialSpec::PoschlTeller { a, center },
            PotentialRepr::SquareWell { depth, left, right } => PotentialSpec::SquareWell { depth, left, right },
            PotentialRepr::Sampled { values } => PotentialSpec::Sampled { values },
        }
    }
}

impl From<PotentialSpec> for PotentialRepr {
    fn from(p: PotentialSpec) -> Self {
        match p {
            PotentialSpec::Zero => PotentialRepr::Zero {},
            PotentialSpec::PoschlTeller { a, center } => PotentialRepr::PoschlTeller { a, center },
            PotentialSpec::SquareWell { depth, left, right } => PotentialRepr::SquareWell { depth, left, right },
            PotentialSpec::Sampled { values } => PotentialRepr::Sampled { values },
        }
    }
}

impl Default for PotentialSpec {
    fn default() -> Self {
        PotentialSpec::Zero
    }
}

impl PotentialSpec {
    pub fn eval(&self, s: f64, length: f64) -> f64 {
        match self {
            PotentialSpec::Zero => 0.0,
            PotentialSpec::PoschlTeller { a, center } => {
                let c = (a * (s - center)).cosh();
                -2.0 * a * a / (c * c)
            }
            PotentialSpec::SquareWell { depth, left, right } => {
                if s >= *left && s <= *right {
                    -depth
                } else {
                    0.0
                }
            }
            PotentialSpec::Sampled { values } => match values.len() {
                0 => 0.0,
                1 => values[0],
                n => {
                    let t = (s / length).clamp(0.0, 1.0) * (n - 1) as f64;
                    let i = (t.floor() as usize).min(n - 2);
                    let w = t - i as f64;
                    values[i] * (1.0 - w) + values[i + 1] * w
                }
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            PotentialSpec::Zero => true,
            PotentialSpec::PoschlTeller { a, .. } => *a == 0.0,
            PotentialSpec::SquareWell { depth, left, right } => *depth == 0.0 || right < left,
            PotentialSpec::Sampled { values } => values.iter().all(|v| *v == 0.0),
        }
    }

    /// Exact value of `∫_0^length (V_-)^p ds` where a closed form exists.
    pub fn negative_part_power_integral(&self, p: f64, length: f64) -> Option<f64> {
        match self {
            PotentialSpec::Zero => Some(0.0),
            PotentialSpec::SquareWell { depth, left, right } => {
                let lo = left.max(0.0);
                let hi = right.min(length);
                if *depth <= 0.0 || hi <= lo {
                    Some(0.0)
                } else {
                    Some(depth.powf(p) * (hi - lo))
                }
            }
            PotentialSpec::PoschlTeller { a, center } => {
                // (2a^2)^p ∫ sech^{2p}(a(s - c)) ds over [0, L]
                if *a == 0.0 {
                    return Some(0.0);
                }
                let a = a.abs();
                let lo = a * (0.0 - center);
                let hi = a * (length - center);
                let sech_pow = |y: f64| y.cosh().powf(-2.0 * p);
                let integral = crate::quadrature::adaptive_simpson(&sech_pow, lo, hi, 1e-13);
                Some((2.0 * a * a).powf(p) * integral / a)
            }
            PotentialSpec::Sampled { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub from: VertexId,
    pub to: VertexId,
    pub length: f64,
    pub potential: PotentialSpec,
    /// Mesh cells for this edge; overrides the global target spacing.
    pub cells: Option<usize>,
}

impl Edge {
    pub fn new(from: VertexId, to: VertexId, length: f64) -> Self {
        Edge { from, to, length, potential: PotentialSpec::Zero, cells: None }
    }

    pub fn with_potential(mut self, potential: PotentialSpec) -> Self {
        self.potential = potential;
        self
    }

    pub fn with_cells(mut self, cells: usize) -> Self {
        self.cells = Some(cells);
        self
    }

    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }

    /// The endpoint opposite to `v`.
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.from == v {
            self.to
        } else {
            self.from
        }
    }
}

/// Metric graph with coupling constant `alpha` in front of `-d²/dx²`.
///
/// Immutable once built; construction does not validate, see
/// [`MetricGraph::validate`] and [`MetricGraph::ensure_valid`].
#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph {
    alpha: f64,
    boundary: Vec<Option<BoundaryCondition>>,
    edges: Vec<Edge>,
}

impl MetricGraph {
    pub fn new(alpha: f64, boundary: Vec<Option<BoundaryCondition>>, edges: Vec<Edge>) -> Self {
        MetricGraph { alpha, boundary, edges }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn with_alpha(&self, alpha: f64) -> Self {
        MetricGraph { alpha, ..self.clone() }
    }

    pub fn vertex_count(&self) -> usize {
        self.boundary.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.boundary.len()).map(VertexId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn boundary(&self, v: VertexId) -> Option<BoundaryCondition> {
        self.boundary[v.0]
    }

    pub fn boundary_conditions(&self) -> &[Option<BoundaryCondition>] {
        &self.boundary
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    /// Degree of every vertex; a self-loop counts twice.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.boundary.len()];
        for e in &self.edges {
            if e.from.0 < deg.len() {
                deg[e.from.0] += 1;
            }
            if e.to.0 < deg.len() {
                deg[e.to.0] += 1;
            }
        }
        deg
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .map(|e| (e.from == v) as usize + (e.to == v) as usize)
            .sum()
    }

    /// Edges incident to `v` in ascending id order; a self-loop appears once.
    pub fn incident_edges(&self, v: VertexId) -> Vec<EdgeId> {
        self.edge_ids()
            .filter(|&e| {
                let edge = self.edge(e);
                edge.from == v || edge.to == v
            })
            .collect()
    }

    /// Degree-1 vertices.
    pub fn leaves(&self) -> Vec<VertexId> {
        self.degrees()
            .iter()
            .enumerate()
            .filter(|(_, d)| **d == 1)
            .map(|(i, _)| VertexId(i))
            .collect()
    }

    pub fn has_potential(&self) -> bool {
        self.edges.iter().any(|e| !e.potential.is_zero())
    }

    /// Rescale every length by `s` and the potential by `s^-2` so that the
    /// spectrum maps to `s^-2 E`.
    pub fn scaled(&self, s: f64) -> MetricGraph {
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let potential = match &e.potential {
                    PotentialSpec::Zero => PotentialSpec::Zero,
                    PotentialSpec::PoschlTeller { a, center } => {
                        PotentialSpec::PoschlTeller { a: a / s, center: center * s }
                    }
                    PotentialSpec::SquareWell { depth, left, right } => PotentialSpec::SquareWell {
                        depth: depth / (s * s),
                        left: left * s,
                        right: right * s,
                    },
                    PotentialSpec::Sampled { values } => PotentialSpec::Sampled {
                        values: values.iter().map(|v| v / (s * s)).collect(),
                    },
                };
                Edge { length: e.length * s, potential, ..e.clone() }
            })
            .collect();
        MetricGraph { alpha: self.alpha, boundary: self.boundary.clone(), edges }
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.boundary.len();
        let mut errors = Vec::new();
        if n == 0 {
            errors.push("graph has no vertices".to_string());
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            errors.push(format!("coupling alpha must be positive, got {}", self.alpha));
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.from.0 >= n || e.to.0 >= n {
                errors.push(format!("edge e{i} references a missing vertex"));
            }
            if !(e.length > 0.0) || !e.length.is_finite() {
                errors.push(format!("edge e{i} has nonpositive length {}", e.length));
            }
            if e.cells == Some(0) {
                errors.push(format!("edge e{i} requests zero mesh cells"));
            }
            match &e.potential {
                PotentialSpec::Sampled { values } if values.len() < 2 => {
                    errors.push(format!("edge e{i} sampled potential needs at least 2 values"));
                }
                PotentialSpec::PoschlTeller { a, .. } if !a.is_finite() => {
                    errors.push(format!("edge e{i} has a non-finite Poschl-Teller parameter"));
                }
                _ => {}
            }
        }
        let degrees = self.degrees();
        for (i, (&d, bc)) in degrees.iter().zip(&self.boundary).enumerate() {
            match (d, bc) {
                (0, _) if n > 1 => errors.push(format!("vertex v{i} is isolated")),
                (1, None) => errors.push(format!("degree-1 vertex v{i} needs a boundary condition")),
                (d, Some(_)) if d != 1 => {
                    errors.push(format!("vertex v{i} has degree {d} but carries a boundary condition"))
                }
                _ => {}
            }
        }
        let connected = n > 0 && self.components().len() == 1;
        if n > 0 && !connected {
            errors.push("graph is not connected".to_string());
        }
        let total_length = self.total_length();
        ValidationReport { connected, degrees, total_length, errors }
    }

    pub fn ensure_valid(&self) -> Result<(), GraphError> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(GraphError::Invalid(report.errors))
        }
    }

    /// Connected components as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        self.components_without(None)
    }

    fn components_without(&self, removed: Option<VertexId>) -> Vec<Vec<VertexId>> {
        let n = self.boundary.len();
        let mut uf = UnionFind::new(n);
        for e in &self.edges {
            if e.from.0 >= n || e.to.0 >= n {
                continue;
            }
            if Some(e.from) == removed || Some(e.to) == removed {
                continue;
            }
            uf.union(e.from.0, e.to.0);
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<VertexId>> = Default::default();
        for v in 0..n {
            if Some(VertexId(v)) == removed {
                continue;
            }
            groups.entry(uf.find(v)).or_default().push(VertexId(v));
        }
        groups.into_values().collect()
    }

    /// First Betti number `E - V + C`.
    pub fn betti_number(&self) -> usize {
        (self.edges.len() + self.components().len()).saturating_sub(self.boundary.len())
    }

    pub fn classify_topology(&self) -> TopologyReport {
        let betti = self.betti_number();
        let degrees = self.degrees();
        let mut isolating = Vec::new();
        for v in self.vertices() {
            if self.isolates_cycle(v, &degrees) {
                isolating.push(v);
            }
        }
        let class = if betti == 0 {
            TopologyClass::Tree
        } else if !isolating.is_empty() {
            TopologyClass::HasCutVertexCycle
        } else if betti == 1 {
            TopologyClass::OneLoopWithLeads
        } else {
            TopologyClass::General
        };
        TopologyReport { class, betti, isolating_cut_vertices: isolating }
    }

    /// True when removing the point `v` leaves a leaf-free piece that
    /// carries a cycle through `v` or inside it.
    fn isolates_cycle(&self, v: VertexId, degrees: &[usize]) -> bool {
        if self.edges.iter().any(|e| e.from == v && e.to == v) {
            return true;
        }
        let parts = self.components_without(Some(v));
        if parts.len() < 2 {
            return false;
        }
        parts.iter().any(|part| {
            let members: BTreeSet<VertexId> = part.iter().copied().collect();
            if members.iter().any(|u| degrees[u.0] == 1) {
                return false;
            }
            let inside = |u: VertexId| u == v || members.contains(&u);
            let edge_count = self
                .edges
                .iter()
                .filter(|e| inside(e.from) && inside(e.to) && (e.from != v || e.to != v))
                .filter(|e| members.contains(&e.from) || members.contains(&e.to))
                .count();
            edge_count > members.len()
        })
    }
}

/// Incremental builder, mostly for fixtures and tests.
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    alpha: f64,
    boundary: Vec<Option<BoundaryCondition>>,
    edges: Vec<Edge>,
}

impl Default for GraphBuilder {
    fn default() -> Self {
        GraphBuilder { alpha: 1.0, boundary: Vec::new(), edges: Vec::new() }
    }
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn vertex(&mut self, bc: Option<BoundaryCondition>) -> VertexId {
        self.boundary.push(bc);
        VertexId(self.boundary.len() - 1)
    }

    pub fn interior(&mut self) -> VertexId {
        self.vertex(None)
    }

    pub fn dirichlet(&mut self) -> VertexId {
        self.vertex(Some(BoundaryCondition::Dirichlet))
    }

    pub fn neumann(&mut self) -> VertexId {
        self.vertex(Some(BoundaryCondition::Neumann))
    }

    pub fn edge(&mut self, from: VertexId, to: VertexId, length: f64) -> EdgeId {
        self.push(Edge::new(from, to, length))
    }

    pub fn edge_with(&mut self, from: VertexId, to: VertexId, length: f64, potential: PotentialSpec) -> EdgeId {
        self.push(Edge::new(from, to, length).with_potential(potential))
    }

    pub fn push(&mut self, edge: Edge) -> EdgeId {
        self.edges.push(edge);
        EdgeId(self.edges.len() - 1)
    }

    pub fn set_boundary(&mut self, v: VertexId, bc: Option<BoundaryCondition>) {
        self.boundary[v.0] = bc;
    }

    pub fn build(self) -> MetricGraph {
        MetricGraph::new(self.alpha, self.boundary, self.edges)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub connected: bool,
    pub degrees: Vec<usize>,
    pub total_length: f64,
    pub errors: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TopologyClass {
    Tree,
    OneLoopWithLeads,
    HasCutVertexCycle,
    General,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopologyReport {
    pub class: TopologyClass,
    pub betti: usize,
    /// Vertices whose removal cuts a cycle-carrying piece off from every leaf.
    pub isolating_cut_vertices: Vec<VertexId>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::f64::consts::PI;

    #[test]
    fn interval_is_valid() {
        let g = fixtures::interval(PI, BoundaryCondition::Dirichlet, BoundaryCondition::Dirichlet);
        let r = g.validate();
        assert!(r.is_valid(), "{:?}", r.errors);
        assert!((r.total_length - PI).abs() < 1e-15);
    }

    #[test]
    fn balloon_is_valid_with_one_leaf() {
        let g = fixtures::balloon(PI);
        let r = g.validate();
        assert!(r.is_valid(), "{:?}", r.errors);
        assert!((r.total_length - 3.0 * PI).abs() < 1e-12);
        assert_eq!(g.leaves().len(), 1);
    }

    #[test]
    fn zero_length_edge_is_reported() {
        let mut b = GraphBuilder::new();
        let u = b.dirichlet();
        let v = b.dirichlet();
        b.edge(u, v, 0.0);
        let r = b.build().validate();
        assert!(!r.is_valid());
        assert!(r.errors.iter().any(|e| e.contains("nonpositive length")));
    }

    #[test]
    fn missing_boundary_and_disconnection_are_reported() {
        let mut b = GraphBuilder::new();
        let u = b.interior();
        let v = b.dirichlet();
        let w = b.dirichlet();
        let x = b.dirichlet();
        b.edge(u, v, 1.0);
        b.edge(w, x, 1.0);
        let r = b.build().validate();
        assert!(!r.connected);
        assert!(r.errors.iter().any(|e| e.contains("needs a boundary condition")));
        assert!(r.errors.iter().any(|e| e.contains("not connected")));
    }

    #[test]
    fn self_loop_counts_twice() {
        let g = fixtures::balloon(1.0);
        let deg = g.degrees();
        assert_eq!(deg[0], 3);
        assert_eq!(deg[1], 1);
    }

    #[test]
    fn topology_of_reference_shapes() {
        let y = fixtures::star(&[1.0, 1.0, 1.0]);
        let t = y.classify_topology();
        assert_eq!(t.class, TopologyClass::Tree);
        assert_eq!(t.betti, 0);

        let t = fixtures::balloon(PI).classify_topology();
        assert_eq!(t.class, TopologyClass::HasCutVertexCycle);
        assert_eq!(t.isolating_cut_vertices, vec![VertexId(0)]);

        let t = fixtures::loop_with_leads(PI, 5.0, None).classify_topology();
        assert_eq!(t.class, TopologyClass::OneLoopWithLeads);
        assert_eq!(t.betti, 1);

        let t = fixtures::wheatstone_bridge([1.0; 4], 1.0, 1.0).classify_topology();
        assert_eq!(t.class, TopologyClass::General);
        assert_eq!(t.betti, 2);
    }

    #[test]
    fn parallel_edge_balloon_is_cut_vertex_cycle() {
        let t = fixtures::fancy_balloon(3).classify_topology();
        assert_eq!(t.class, TopologyClass::HasCutVertexCycle);
        assert_eq!(t.betti, 2);
    }

    #[test]
    fn sampled_potential_interpolates() {
        let p = PotentialSpec::Sampled { values: vec![0.0, 2.0, 4.0] };
        assert_eq!(p.eval(0.0, 2.0), 0.0);
        assert!((p.eval(0.5, 2.0) - 1.0).abs() < 1e-15);
        assert_eq!(p.eval(2.0, 2.0), 4.0);
    }

    #[test]
    fn poschl_teller_closed_form_integral() {
        // ∫_R (2 sech^2 x)^2 dx = 16/3
        let p = PotentialSpec::PoschlTeller { a: 1.0, center: 30.0 };
        let v = p.negative_part_power_integral(2.0, 60.0).unwrap();
        assert!((v - 16.0 / 3.0).abs() < 1e-10, "{v}");
    }
}
