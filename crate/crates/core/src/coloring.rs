//! Admissible {0,1} edge colorings of trees and the piecewise-affine
//! functions they induce.

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::ColoringError;
use crate::fem::Spectrum;
use crate::graph::{EdgeId, MetricGraph, VertexId};
use crate::report::InequalityReport;

pub const MAX_ENUMERATION_EDGES: usize = 22;

/// Bit `i` of `mask` colors edge `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coloring {
    pub mask: u32,
    pub edges: usize,
}

impl Coloring {
    pub fn new(mask: u32, edges: usize) -> Self {
        Coloring { mask, edges }
    }

    pub fn zero(edges: usize) -> Self {
        Coloring { mask: 0, edges }
    }

    pub fn get(&self, e: usize) -> bool {
        self.mask >> e & 1 == 1
    }

    pub fn colored(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges).filter(|&e| self.get(e))
    }

    pub fn symmetric_difference(&self, other: &Coloring) -> Coloring {
        Coloring { mask: self.mask ^ other.mask, edges: self.edges }
    }
}

fn require_tree(graph: &MetricGraph) -> Result<(), ColoringError> {
    let betti = graph.betti_number();
    if betti != 0 || graph.components().len() != 1 {
        return Err(ColoringError::NotATree(betti));
    }
    Ok(())
}

/// Parity holds at every vertex of degree at least 2; free ends are
/// unconstrained.
pub fn is_admissible(graph: &MetricGraph, coloring: &Coloring) -> bool {
    let degrees = graph.degrees();
    let mut colored = vec![0usize; degrees.len()];
    for e in coloring.colored() {
        let edge = &graph.edges()[e];
        colored[edge.from.0] += 1;
        colored[edge.to.0] += 1;
    }
    colored.iter().zip(&degrees).all(|(c, d)| *d < 2 || c % 2 == 0)
}

/// Every admissible coloring, in increasing mask order.
///
/// Depth-first over edges in id order; a vertex's parity is checked as soon
/// as its last incident edge has been decided.
pub fn enumerate_admissible(graph: &MetricGraph) -> Result<Vec<Coloring>, ColoringError> {
    require_tree(graph)?;
    let m = graph.edge_count();
    if m > MAX_ENUMERATION_EDGES {
        return Err(ColoringError::TooManyEdges(m, MAX_ENUMERATION_EDGES));
    }
    let degrees = graph.degrees();
    let mut closes: Vec<Vec<usize>> = vec![Vec::new(); m];
    for v in 0..degrees.len() {
        if degrees[v] >= 2 {
            let last = graph.incident_edges(VertexId(v)).last().expect("vertex has edges").0;
            closes[last].push(v);
        }
    }
    let ends: Vec<(usize, usize)> = graph.edges().iter().map(|e| (e.from.0, e.to.0)).collect();
    let mut parity = vec![0u8; degrees.len()];
    let mut out = Vec::new();

    fn walk(
        e: usize,
        mask: u32,
        ends: &[(usize, usize)],
        closes: &[Vec<usize>],
        parity: &mut [u8],
        out: &mut Vec<Coloring>,
    ) {
        if e == ends.len() {
            out.push(Coloring::new(mask, ends.len()));
            return;
        }
        let (a, b) = ends[e];
        for bit in [0u8, 1] {
            parity[a] ^= bit;
            parity[b] ^= bit;
            if closes[e].iter().all(|&v| parity[v] == 0) {
                walk(e + 1, mask | (bit as u32) << e, ends, closes, parity, out);
            }
            parity[a] ^= bit;
            parity[b] ^= bit;
        }
    }
    walk(0, 0, &ends, &closes, &mut parity, &mut out);
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct EdgeCounts {
    pub counts: Vec<u64>,
    pub uniform: bool,
}

pub fn edge_counts(colorings: &[Coloring], edges: usize) -> EdgeCounts {
    let mut counts = vec![0u64; edges];
    for c in colorings {
        for e in c.colored() {
            counts[e] += 1;
        }
    }
    let uniform = counts.windows(2).all(|w| w[0] == w[1]);
    EdgeCounts { counts, uniform }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct BinomialRow {
    pub n: u32,
    pub even: u128,
    pub odd: u128,
}

/// Even- and odd-index binomial sums of `C(n-1, ·)` for `2 <= n <= n_max`.
/// Returns the rows and whether every row balances at `2^{n-2}`.
pub fn binomial_identity_check(n_max: u32) -> (Vec<BinomialRow>, bool) {
    assert!(n_max <= 60, "exact range is n <= 60");
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 2..=n_max {
        let top = (n - 1) as u128;
        let (mut even, mut odd) = (0u128, 0u128);
        let mut c = 1u128;
        for k in 0..=top {
            if k % 2 == 0 {
                even += c;
            } else {
                odd += c;
            }
            c = c * (top - k) / (k + 1);
        }
        ok &= even == odd && even == 1u128 << (n - 2);
        rows.push(BinomialRow { n, even, odd });
    }
    (rows, ok)
}

/// Continuous piecewise-affine function with integer slopes, one per edge
/// in the edge's own orientation, and exact vertex values.
#[derive(Debug, Clone, PartialEq)]
pub struct GFunction {
    pub slopes: Vec<i8>,
    pub values: Vec<BigRational>,
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite length")
}

impl GFunction {
    /// Slopes read off from vertex values; every slope must come out as
    /// exactly -1, 0 or 1.
    pub fn from_vertex_values(graph: &MetricGraph, values: &[f64]) -> Result<Self, String> {
        let values: Vec<BigRational> = values.iter().map(|&v| exact(v)).collect();
        let mut slopes = Vec::with_capacity(graph.edge_count());
        for (i, e) in graph.edges().iter().enumerate() {
            let s = (&values[e.to.0] - &values[e.from.0]) / exact(e.length);
            let slope = if s.is_zero() {
                0
            } else if s == BigRational::one() {
                1
            } else if s == -BigRational::one() {
                -1
            } else {
                return Err(format!("edge {i} has slope {s}"));
            };
            slopes.push(slope);
        }
        Ok(GFunction { slopes, values })
    }

    /// Sum of outward slopes at `v`.
    pub fn outward_sum(&self, graph: &MetricGraph, v: VertexId) -> i64 {
        graph
            .edges()
            .iter()
            .zip(&self.slopes)
            .map(|(e, &s)| (e.from == v) as i64 * s as i64 - (e.to == v) as i64 * s as i64)
            .sum()
    }

    /// Slopes in {-1, 0, 1}, zero outward sum at every vertex of degree at
    /// least 2, exact continuity along every edge.
    pub fn validate(&self, graph: &MetricGraph) -> Result<(), String> {
        if self.slopes.len() != graph.edge_count() || self.values.len() != graph.vertex_count() {
            return Err("size mismatch".into());
        }
        if let Some(i) = self.slopes.iter().position(|s| s.abs() > 1) {
            return Err(format!("edge {i} has slope {}", self.slopes[i]));
        }
        let degrees = graph.degrees();
        for v in graph.vertices() {
            if degrees[v.0] >= 2 && self.outward_sum(graph, v) != 0 {
                return Err(format!("outward slopes at vertex {} sum to {}", v.0, self.outward_sum(graph, v)));
            }
        }
        for (i, e) in graph.edges().iter().enumerate() {
            let expected = &self.values[e.from.0] + BigRational::from_integer(self.slopes[i].into()) * exact(e.length);
            if expected != self.values[e.to.0] {
                return Err(format!("discontinuous along edge {i}"));
            }
        }
        Ok(())
    }

    /// `a_e = slope²`.
    pub fn weights(&self) -> Vec<f64> {
        self.slopes.iter().map(|s| (s * s) as f64).collect()
    }

    pub fn value_f64(&self, v: VertexId) -> f64 {
        let r = &self.values[v.0];
        r.to_f64().unwrap_or(f64::NAN)
    }

    /// `(edge, slope, value at from, value at to)` rows.
    pub fn listing(&self, graph: &MetricGraph) -> Vec<(EdgeId, i8, f64, f64)> {
        graph
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| (EdgeId(i), self.slopes[i], self.value_f64(e.from), self.value_f64(e.to)))
            .collect()
    }
}

/// Function with `|G′| = coloring` on a tree.
///
/// Rooted at the lowest-numbered vertex of degree at least 2 (vertex 0 if
/// there is none). At each vertex in preorder the colored child edges, in
/// id order, get alternating outward signs that cancel the parent edge's
/// contribution, starting with `-1` unless the parent edge points inward.
pub fn realize_g(graph: &MetricGraph, coloring: &Coloring) -> Result<GFunction, ColoringError> {
    require_tree(graph)?;
    let degrees = graph.degrees();
    let n = graph.vertex_count();
    let root = (0..n).find(|&v| degrees[v] >= 2).unwrap_or(0);
    let mut slopes = vec![0i8; graph.edge_count()];
    let mut values = vec![BigRational::zero(); n];
    let mut visited = vec![false; n];
    let mut stack = vec![(root, None::<usize>)];
    visited[root] = true;
    while let Some((v, parent)) = stack.pop() {
        let vid = VertexId(v);
        let outward = |slope: i8, e: usize| if graph.edges()[e].from == vid { slope } else { -slope };
        let incoming = parent.map(|p| outward(slopes[p], p)).unwrap_or(0);
        let children: Vec<usize> = graph.incident_edges(vid).iter().map(|e| e.0).filter(|&e| Some(e) != parent).collect();
        let colored = children.iter().filter(|&&e| coloring.get(e)).count() + parent.is_some_and(|p| coloring.get(p)) as usize;
        if degrees[v] >= 2 && colored % 2 == 1 {
            return Err(ColoringError::Parity(format!("vertex {v}")));
        }
        let mut sign: i8 = if incoming < 0 { 1 } else { -1 };
        for &e in &children {
            let edge = &graph.edges()[e];
            let out = if coloring.get(e) {
                let s = sign;
                sign = -sign;
                s
            } else {
                0
            };
            slopes[e] = if edge.from == vid { out } else { -out };
            let w = edge.other(vid).0;
            values[w] = &values[v] + BigRational::from_integer(out.into()) * exact(edge.length);
        }
        // reversed so that the stack pops children in id order
        for &e in children.iter().rev() {
            let w = graph.edges()[e].other(vid).0;
            if !visited[w] {
                visited[w] = true;
                stack.push((w, Some(e)));
            }
        }
    }
    let g = GFunction { slopes, values };
    g.validate(graph).map_err(ColoringError::Parity)?;
    Ok(g)
}

/// Sum over colorings of the per-coloring weighted sum-rule expression
/// `Σ_j (z-E_j)₊² Σ_e a_e p_e(j) - 4α (z-E_j)₊ Σ_e a_e p′_e(j)`, with the
/// weights taken from [`realize_g`], next to `p·S(z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AveragedYang {
    pub p: u64,
    pub averaged: Vec<f64>,
    pub scaled_yang: Vec<f64>,
    /// Largest `|averaged - p·S| / scale` over the grid.
    pub max_relative_deviation: f64,
    pub report: InequalityReport,
}

pub fn averaged_yang(
    graph: &MetricGraph,
    spectrum: &Spectrum,
    colorings: &[Coloring],
    zs: &[f64],
    tol: f64,
) -> Result<AveragedYang, ColoringError> {
    let counts = edge_counts(colorings, graph.edge_count());
    if !counts.uniform {
        return Err(ColoringError::NonUniform(counts.counts));
    }
    let p = counts.counts.first().copied().unwrap_or(0);
    let alpha = graph.alpha();
    let gradients = spectrum.gradient_norms();
    let weights = colorings.iter().map(|c| realize_g(graph, c).map(|g| g.weights())).collect::<Result<Vec<_>, _>>()?;

    let (mut averaged, mut scaled, mut margins) = (Vec::new(), Vec::new(), Vec::new());
    let mut worst: f64 = 0.0;
    for &z in zs {
        let mut total = 0.0;
        for a in &weights {
            for (j, &e) in spectrum.eigenvalues.iter().enumerate() {
                if e >= z {
                    continue;
                }
                let d = z - e;
                let mass: f64 = a.iter().zip(&spectrum.edge_mass[j]).map(|(w, m)| w * m).sum();
                let grad: f64 = a.iter().zip(&spectrum.edge_dirichlet[j]).map(|(w, m)| w * m).sum();
                total += d * d * mass - 4.0 * alpha * d * grad;
            }
        }
        let (mut s, mut scale, mut r2) = (0.0, 0.0, 0.0);
        for (&e, &g) in spectrum.eigenvalues.iter().zip(&gradients) {
            if e < z {
                let d = z - e;
                s += d * d - 4.0 * alpha * d * g;
                scale += d * d + 4.0 * alpha * d * g;
                r2 += d * d;
            }
        }
        let ps = p as f64 * s;
        if scale > 0.0 {
            worst = worst.max((total - ps).abs() / (p.max(1) as f64 * scale));
        }
        margins.push(-s / (z * z).max(r2).max(f64::MIN_POSITIVE));
        averaged.push(total);
        scaled.push(ps);
    }
    let report = InequalityReport::new("averaged_yang", zs.to_vec())
        .param("alpha", alpha)
        .param("p", p as f64)
        .param("max_relative_deviation", worst)
        .column("averaged", averaged.clone())
        .column("p_times_s", scaled.clone())
        .judge(&margins, tol);
    Ok(AveragedYang { p, averaged, scaled_yang: scaled, max_relative_deviation: worst, report })
}

/// Vertex values of `G(x, y) = x + y` at planar coordinates.
pub fn planar_sum_values(coords: &[(f64, f64)]) -> Vec<f64> {
    coords.iter().map(|(x, y)| x + y).collect()
}

/// Number of edges whose slope magnitude differs from the coloring.
pub fn support_mismatch(g: &GFunction, coloring: &Coloring) -> usize {
    g.slopes.iter().enumerate().filter(|(e, s)| (s.abs() == 1) != coloring.get(*e)).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::solve_graph;
    use crate::fixtures;
    use crate::graph::BoundaryCondition::*;

    #[test]
    fn y_graph_has_four_colorings() {
        let g = fixtures::star(&[1.0, 2.0, 3.0]);
        let cs = enumerate_admissible(&g).unwrap();
        let masks: Vec<u32> = cs.iter().map(|c| c.mask).collect();
        assert_eq!(masks, vec![0, 0b011, 0b101, 0b110]);
        assert_eq!(edge_counts(&cs, 3).counts, vec![2, 2, 2]);
    }

    #[test]
    fn single_edge_has_both_colorings() {
        let g = fixtures::interval(1.0, Dirichlet, Dirichlet);
        let cs = enumerate_admissible(&g).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(edge_counts(&cs, 1).counts, vec![1]);
    }

    #[test]
    fn y_graph_realization_matches_sign_pattern() {
        let g = fixtures::star(&[1.0, 1.0, 1.0]);
        let f = realize_g(&g, &Coloring::new(0b110, 3)).unwrap();
        assert_eq!(f.slopes, vec![0, -1, 1]);
        let zero = realize_g(&g, &Coloring::zero(3)).unwrap();
        assert!(zero.slopes.iter().all(|s| *s == 0));
        assert!(zero.values.iter().all(|v| v.is_zero()));
    }

    #[test]
    fn path_all_colored_alternates() {
        let g = fixtures::path(&[1.0, 0.5, 2.0]);
        let f = realize_g(&g, &Coloring::new(0b111, 3)).unwrap();
        f.validate(&g).unwrap();
        assert!(f.slopes.iter().all(|s| s.abs() == 1));
        assert_eq!(f.outward_sum(&g, VertexId(1)), 0);
        assert_eq!(f.outward_sum(&g, VertexId(2)), 0);
    }

    #[test]
    fn inadmissible_coloring_is_rejected() {
        let g = fixtures::star(&[1.0, 1.0, 1.0]);
        assert!(matches!(realize_g(&g, &Coloring::new(0b001, 3)), Err(ColoringError::Parity(_))));
    }

    #[test]
    fn cycles_are_rejected() {
        assert!(matches!(enumerate_admissible(&fixtures::balloon(1.0)), Err(ColoringError::NotATree(1))));
    }

    #[test]
    fn binomial_rows() {
        let (rows, ok) = binomial_identity_check(60);
        assert!(ok);
        assert_eq!((rows[0].even, rows[0].odd), (1, 1));
        assert_eq!((rows[2].even, rows[2].odd), (4, 4));
        assert_eq!(rows[18].even, 1 << 18);
    }

    #[test]
    fn hash_graph_planar_sum() {
        let (g, coords) = fixtures::hash_graph(3, 3, 1.0, 0.5);
        let f = GFunction::from_vertex_values(&g, &planar_sum_values(&coords)).unwrap();
        f.validate(&g).unwrap();
        assert!(f.slopes.iter().all(|s| s.abs() == 1));
    }

    #[test]
    fn averaged_equals_p_times_s_on_y_graph() {
        let g = fixtures::star(&[1.0, 1.5, 0.7]);
        let (_, s) = solve_graph(&g, 0.02, 12).unwrap();
        let cs = enumerate_admissible(&g).unwrap();
        let zs: Vec<f64> = (1..=10).map(|i| s.eigenvalues[0] * (0.5 + 0.4 * i as f64)).collect();
        let r = averaged_yang(&g, &s, &cs, &zs, 1e-3).unwrap();
        assert_eq!(r.p, 2);
        assert!(r.max_relative_deviation < 1e-12, "{}", r.max_relative_deviation);
        assert!(r.report.passed());
    }
}
