//! Builders for the named graph families used throughout the crate.

use std::f64::consts::PI;

use rand::Rng;

use crate::graph::{BoundaryCondition, GraphBuilder, MetricGraph, PotentialSpec, VertexId};

/// Single edge `[0, length]`.
pub fn interval(length: f64, left: BoundaryCondition, right: BoundaryCondition) -> MetricGraph {
    let mut b = GraphBuilder::new();
    let u = b.vertex(Some(left));
    let v = b.vertex(Some(right));
    b.edge(u, v, length);
    b.build()
}

/// Loop of length `2π` at `v0` plus a string `v0 -> v1` of length `string`,
/// Dirichlet at the far end. Edge 0 is the loop, edge 1 the string.
pub fn balloon(string: f64) -> MetricGraph {
    balloon_with(string, PotentialSpec::Zero)
}

pub fn balloon_with(string: f64, loop_potential: PotentialSpec) -> MetricGraph {
    let mut b = GraphBuilder::new();
    let node = b.interior();
    let end = b.dirichlet();
    b.edge_with(node, node, 2.0 * PI, loop_potential);
    b.edge(node, end, string);
    b.build()
}

/// Balloon whose loop carries `-2a²/cosh²(a x)` with `x` measured from the
/// point opposite the junction and `tanh(aπ) = 1/2`; the infinite string is
/// truncated to `string` with a Dirichlet cap.
pub fn poschl_teller_balloon(string: f64) -> MetricGraph {
    let a = 0.5f64.atanh() / PI;
    balloon_with(string, PotentialSpec::PoschlTeller { a, center: PI })
}

/// The balloon's loop potential laid out on a path: `lead | 2π core | lead`.
pub fn poschl_teller_interval(lead: f64) -> MetricGraph {
    let a = 0.5f64.atanh() / PI;
    let mut b = GraphBuilder::new();
    let left = b.dirichlet();
    let p = b.interior();
    let q = b.interior();
    let right = b.dirichlet();
    b.edge(left, p, lead);
    b.edge_with(p, q, 2.0 * PI, PotentialSpec::PoschlTeller { a, center: PI });
    b.edge(q, right, lead);
    b.build()
}

/// String of length `π` (edge 0, `v0 -> v2`) attached at `v0` to `n`
/// parallel edges of length `π` joining `v0` and `v1`.
pub fn fancy_balloon(n: usize) -> MetricGraph {
    let mut b = GraphBuilder::new();
    let v0 = b.interior();
    let v1 = b.interior();
    let end = b.dirichlet();
    b.edge(v0, end, PI);
    for _ in 0..n {
        b.edge(v0, v1, PI);
    }
    b.build()
}

/// Star with one leaf per entry of `lengths`, all oriented away from the
/// center `v0`; Dirichlet at every leaf end.
pub fn star(lengths: &[f64]) -> MetricGraph {
    let mut b = GraphBuilder::new();
    let c = b.interior();
    for &l in lengths {
        let leaf = b.dirichlet();
        b.edge(c, leaf, l);
    }
    b.build()
}

/// Path `v0 - v1 - ... - vn` with Dirichlet ends.
pub fn path(lengths: &[f64]) -> MetricGraph {
    let mut b = GraphBuilder::new();
    let mut prev = b.dirichlet();
    for (i, &l) in lengths.iter().enumerate() {
        let next = if i + 1 == lengths.len() { b.dirichlet() } else { b.interior() };
        b.edge(prev, next, l);
        prev = next;
    }
    b.build()
}

/// Spine path of `spine.len()` edges with one leg hung from every interior
/// spine vertex.
pub fn caterpillar(spine: &[f64], legs: &[f64]) -> MetricGraph {
    assert_eq!(legs.len() + 1, spine.len(), "one leg per interior spine vertex");
    let mut b = GraphBuilder::new();
    let mut prev = b.dirichlet();
    let mut joints = Vec::new();
    for (i, &l) in spine.iter().enumerate() {
        let next = if i + 1 == spine.len() { b.dirichlet() } else { b.interior() };
        b.edge(prev, next, l);
        if i + 1 < spine.len() {
            joints.push(next);
        }
        prev = next;
    }
    for (&j, &l) in joints.iter().zip(legs) {
        let end = b.dirichlet();
        b.edge(j, end, l);
    }
    b.build()
}

/// Circle made of two semicircles of length `semicircle` between `v0` and
/// `v1`, with a lead of length `lead` (Dirichlet cap) at each of them.
///
/// Edges: 0 = lead at `v0`, 1 = lead at `v1`, 2 and 3 = semicircles
/// `v0 -> v1`. `loop_potential` goes on edge 2.
pub fn loop_with_leads(semicircle: f64, lead: f64, loop_potential: Option<PotentialSpec>) -> MetricGraph {
    let mut b = GraphBuilder::new();
    let a = b.interior();
    let c = b.interior();
    let end_a = b.dirichlet();
    let end_c = b.dirichlet();
    b.edge(a, end_a, lead);
    b.edge(c, end_c, lead);
    b.edge_with(a, c, semicircle, loop_potential.unwrap_or_default());
    b.edge(a, c, semicircle);
    b.build()
}

/// Two-lead bridge circuit. `arms` are the lengths of `A-C`, `A-D`, `C-B`,
/// `D-B`; the bridge is `C-D`; leads hang from `A` and `B`.
///
/// Edge order: 0 lead at A, 1..=4 arms, 5 bridge, 6 lead at B.
pub fn wheatstone_bridge(arms: [f64; 4], bridge: f64, lead: f64) -> MetricGraph {
    let mut b = GraphBuilder::new();
    let t1 = b.dirichlet();
    let a = b.interior();
    let c = b.interior();
    let d = b.interior();
    let bb = b.interior();
    let t2 = b.dirichlet();
    b.edge(t1, a, lead);
    b.edge(a, c, arms[0]);
    b.edge(a, d, arms[1]);
    b.edge(c, bb, arms[2]);
    b.edge(d, bb, arms[3]);
    b.edge(c, d, bridge);
    b.edge(bb, t2, lead);
    b.build()
}

/// Planar grid of `vertical` x `horizontal` segments spaced `spacing`
/// apart, each overhanging its outermost crossing by `overhang` and ending
/// in a Dirichlet vertex. Every crossing has degree 4.
///
/// Returns the graph and the planar coordinates of every vertex. Edges are
/// oriented toward increasing `x` or `y`.
pub fn hash_graph(vertical: usize, horizontal: usize, spacing: f64, overhang: f64) -> (MetricGraph, Vec<(f64, f64)>) {
    let mut b = GraphBuilder::new();
    let mut coords = Vec::new();
    let mut crossing = vec![vec![VertexId(0); horizontal]; vertical];
    for (i, column) in crossing.iter_mut().enumerate() {
        for (j, slot) in column.iter_mut().enumerate() {
            *slot = b.interior();
            coords.push((i as f64 * spacing, j as f64 * spacing));
        }
    }
    let mut end = |b: &mut GraphBuilder, x: f64, y: f64| {
        coords.push((x, y));
        b.dirichlet()
    };
    let top = (horizontal - 1) as f64 * spacing;
    let right = (vertical - 1) as f64 * spacing;
    for (i, column) in crossing.iter().enumerate() {
        let x = i as f64 * spacing;
        let low = end(&mut b, x, -overhang);
        b.edge(low, column[0], overhang);
        for j in 1..horizontal {
            b.edge(column[j - 1], column[j], spacing);
        }
        let high = end(&mut b, x, top + overhang);
        b.edge(column[horizontal - 1], high, overhang);
    }
    for j in 0..horizontal {
        let y = j as f64 * spacing;
        let low = end(&mut b, -overhang, y);
        b.edge(low, crossing[0][j], overhang);
        for i in 1..vertical {
            b.edge(crossing[i - 1][j], crossing[i][j], spacing);
        }
        let high = end(&mut b, right + overhang, y);
        b.edge(crossing[vertical - 1][j], high, overhang);
    }
    (b.build(), coords)
}

/// Random tree on `edges` edges: vertex `i` hangs from a uniformly chosen
/// earlier vertex, lengths uniform in `[min_len, max_len]`, Dirichlet at
/// every degree-1 vertex.
pub fn random_tree<R: Rng>(rng: &mut R, edges: usize, min_len: f64, max_len: f64) -> MetricGraph {
    assert!(edges >= 1);
    let mut parents = Vec::with_capacity(edges);
    let mut lengths = Vec::with_capacity(edges);
    for i in 1..=edges {
        parents.push(rng.gen_range(0..i));
        lengths.push(rng.gen_range(min_len..=max_len));
    }
    let mut degree = vec![0usize; edges + 1];
    for (i, &p) in parents.iter().enumerate() {
        degree[p] += 1;
        degree[i + 1] += 1;
    }
    let mut b = GraphBuilder::new();
    let ids: Vec<VertexId> = degree
        .iter()
        .map(|&d| b.vertex(if d == 1 { Some(BoundaryCondition::Dirichlet) } else { None }))
        .collect();
    for (i, (&p, &l)) in parents.iter().zip(&lengths).enumerate() {
        b.edge(ids[p], ids[i + 1], l);
    }
    b.build()
}

/// Same tree with a square well of the given depth on the middle half of
/// edge `edge`.
pub fn with_square_well(graph: &MetricGraph, edge: usize, depth: f64) -> MetricGraph {
    let mut b = GraphBuilder::new().alpha(graph.alpha());
    for v in graph.vertices() {
        b.vertex(graph.boundary(v));
    }
    for (i, e) in graph.edges().iter().enumerate() {
        let mut e = e.clone();
        if i == edge {
            e.potential = PotentialSpec::SquareWell { depth, left: 0.25 * e.length, right: 0.75 * e.length };
        }
        b.push(e);
    }
    b.build()
}
