//! Resistor-network view of a metric graph: edges are wires with
//! resistance equal to their length, leaf ends are external leads.
//! All arithmetic is exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::CircuitError;
use crate::graph::{MetricGraph, VertexId};

#[derive(Debug, Clone, PartialEq)]
pub struct Wire {
    pub from: usize,
    pub to: usize,
    pub conductance: BigRational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitModel {
    pub nodes: usize,
    /// One wire per graph edge, same order.
    pub wires: Vec<Wire>,
    pub terminals: Vec<usize>,
}

pub fn exact(x: f64) -> Result<BigRational, CircuitError> {
    BigRational::from_float(x).filter(|r| r.is_positive()).ok_or(CircuitError::Length(x))
}

/// `p/q` with the denominator always written out.
pub fn fraction_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl CircuitModel {
    /// Terminals default to the degree-1 vertices. A leaf edge keeps its own
    /// length as series resistance unless `lead_resistance` overrides it.
    pub fn from_graph(graph: &MetricGraph, terminals: Option<&[VertexId]>, lead_resistance: Option<f64>) -> Result<Self, CircuitError> {
        let degrees = graph.degrees();
        let lead = lead_resistance.map(exact).transpose()?;
        let mut wires = Vec::with_capacity(graph.edge_count());
        for e in graph.edges() {
            let is_lead = degrees[e.from.0] == 1 || degrees[e.to.0] == 1;
            let resistance = match (&lead, is_lead) {
                (Some(r), true) => r.clone(),
                _ => exact(e.length)?,
            };
            wires.push(Wire { from: e.from.0, to: e.to.0, conductance: resistance.recip() });
        }
        let terminals: Vec<usize> = match terminals {
            Some(t) => t.iter().map(|v| v.0).collect(),
            None => graph.leaves().iter().map(|v| v.0).collect(),
        };
        Ok(CircuitModel { nodes: graph.vertex_count(), wires, terminals })
    }

    /// Same circuit with every resistance multiplied by `s`.
    pub fn scaled(&self, s: &BigRational) -> Self {
        let mut out = self.clone();
        for w in &mut out.wires {
            w.conductance = &w.conductance / s;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurrentSolution {
    pub potentials: Vec<BigRational>,
    /// Signed along each wire's `from -> to` direction.
    pub currents: Vec<BigRational>,
    pub terminal_voltages: Vec<BigRational>,
}

impl CurrentSolution {
    /// Net current leaving each node; exactly zero away from terminals.
    pub fn net_outflow(&self, circuit: &CircuitModel) -> Vec<BigRational> {
        let mut net = vec![BigRational::zero(); circuit.nodes];
        for (w, i) in circuit.wires.iter().zip(&self.currents) {
            net[w.from] += i;
            net[w.to] -= i;
        }
        net
    }
}

/// Solve the weighted Laplacian with terminal potentials held fixed.
pub fn solve_nodal(circuit: &CircuitModel, voltages: &[BigRational]) -> Result<CurrentSolution, CircuitError> {
    if circuit.terminals.is_empty() {
        return Err(CircuitError::NoTerminals);
    }
    if voltages.len() != circuit.terminals.len() {
        return Err(CircuitError::VoltageCount { expected: circuit.terminals.len(), found: voltages.len() });
    }
    let n = circuit.nodes;
    let mut fixed: Vec<Option<BigRational>> = vec![None; n];
    for (&t, v) in circuit.terminals.iter().zip(voltages) {
        fixed[t] = Some(v.clone());
    }
    let unknown: Vec<usize> = (0..n).filter(|&v| fixed[v].is_none()).collect();
    let mut slot = vec![usize::MAX; n];
    for (i, &v) in unknown.iter().enumerate() {
        slot[v] = i;
    }
    let m = unknown.len();
    let mut a = vec![vec![BigRational::zero(); m + 1]; m];
    for w in &circuit.wires {
        if w.from == w.to {
            continue;
        }
        for (p, q) in [(w.from, w.to), (w.to, w.from)] {
            if slot[p] == usize::MAX {
                continue;
            }
            let row = &mut a[slot[p]];
            row[slot[p]] += &w.conductance;
            match &fixed[q] {
                Some(v) => row[m] += &w.conductance * v,
                None => row[slot[q]] -= &w.conductance,
            }
        }
    }
    // Gauss–Jordan; any missing pivot means a floating component
    for col in 0..m {
        let pivot = (col..m).find(|&r| !a[r][col].is_zero()).ok_or(CircuitError::Singular)?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut().skip(col) {
            *x *= &inv;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x -= &f * p;
            }
        }
    }
    let potentials: Vec<BigRational> =
        (0..n).map(|v| fixed[v].clone().unwrap_or_else(|| a[slot[v]][m].clone())).collect();
    let currents = circuit
        .wires
        .iter()
        .map(|w| (&potentials[w.from] - &potentials[w.to]) * &w.conductance)
        .collect();
    Ok(CurrentSolution { potentials, currents, terminal_voltages: voltages.to_vec() })
}

/// Live/dead classification under every terminal voltage assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportAnalysis {
    pub live: Vec<bool>,
    pub dead_edges: Vec<usize>,
    /// With no dead edges: extremes over edges of the largest normalized
    /// squared current seen in any probe.
    pub a_min: Option<BigRational>,
    pub a_max: Option<BigRational>,
    /// One solution per non-ground terminal held at 1.
    pub probes: Vec<CurrentSolution>,
}

/// Probes with each terminal but the last (ground) raised to 1 in turn.
/// Currents are linear in the voltages, so an edge quiet in every probe is
/// quiet under every assignment.
pub fn support_analysis(circuit: &CircuitModel) -> Result<SupportAnalysis, CircuitError> {
    let wires = circuit.wires.len();
    let t = circuit.terminals.len();
    if t < 2 {
        if t == 1 {
            // still surfaces floating components as an error
            solve_nodal(circuit, &[BigRational::zero()])?;
        }
        return Ok(SupportAnalysis {
            live: vec![false; wires],
            dead_edges: (0..wires).collect(),
            a_min: None,
            a_max: None,
            probes: Vec::new(),
        });
    }
    let mut probes = Vec::with_capacity(t - 1);
    for k in 0..t - 1 {
        let voltages: Vec<BigRational> =
            (0..t).map(|i| if i == k { BigRational::one() } else { BigRational::zero() }).collect();
        probes.push(solve_nodal(circuit, &voltages)?);
    }
    let live: Vec<bool> = (0..wires).map(|e| probes.iter().any(|p| !p.currents[e].is_zero())).collect();
    let dead_edges: Vec<usize> = (0..wires).filter(|&e| !live[e]).collect();
    let (mut a_min, mut a_max) = (None, None);
    if dead_edges.is_empty() {
        let mut best = vec![BigRational::zero(); wires];
        for p in &probes {
            let peak = p.currents.iter().map(|i| i.abs()).max().unwrap_or_else(BigRational::zero);
            if peak.is_zero() {
                continue;
            }
            for (b, i) in best.iter_mut().zip(&p.currents) {
                let r = i / &peak;
                let sq = &r * &r;
                if sq > *b {
                    *b = sq;
                }
            }
        }
        a_min = best.iter().min().cloned();
        a_max = best.iter().max().cloned();
    }
    Ok(SupportAnalysis { live, dead_edges, a_min, a_max, probes })
}

/// Outcome of the conjectured criterion for a full-support G-family: no
/// cut vertex isolating a cycle, and no wire that stays dead.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GFamilyVerdict {
    pub exists_full_support: bool,
    pub reason: String,
    pub condition_a: bool,
    pub condition_b_witness: Option<Vec<usize>>,
    pub criterion: &'static str,
}

pub fn g_family_verdict(graph: &MetricGraph, lead_resistance: Option<f64>) -> Result<GFamilyVerdict, CircuitError> {
    let topology = graph.classify_topology();
    let condition_a = !topology.isolating_cut_vertices.is_empty();
    let circuit = CircuitModel::from_graph(graph, None, lead_resistance)?;
    let support = support_analysis(&circuit)?;
    let witness = (!support.dead_edges.is_empty()).then(|| support.dead_edges.clone());
    let reason = match (condition_a, &witness) {
        (true, _) => format!(
            "cut vertex {:?} isolates a cycle from every lead",
            topology.isolating_cut_vertices.iter().map(|v| v.0).collect::<Vec<_>>()
        ),
        (false, Some(dead)) => format!("edges {dead:?} carry no current for any lead voltages"),
        (false, None) => "every edge carries current for some lead voltages".to_string(),
    };
    Ok(GFamilyVerdict {
        exists_full_support: !condition_a && witness.is_none(),
        reason,
        condition_a,
        condition_b_witness: witness,
        criterion: "conjectured",
    })
}

/// JSON-ready summary with currents as exact fraction strings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircuitReport {
    pub terminals: Vec<usize>,
    pub dead_edges: Vec<usize>,
    pub exists_full_support: bool,
    pub condition_a: bool,
    pub reason: String,
    pub criterion: &'static str,
    pub a_min: Option<String>,
    pub a_max: Option<String>,
    pub a_min_value: Option<f64>,
    pub a_max_value: Option<f64>,
    pub probes: Vec<ProbeReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub terminal_voltages: Vec<String>,
    pub currents: Vec<String>,
}

pub fn circuit_report(
    graph: &MetricGraph,
    terminals: Option<&[VertexId]>,
    lead_resistance: Option<f64>,
) -> Result<CircuitReport, CircuitError> {
    let circuit = CircuitModel::from_graph(graph, terminals, lead_resistance)?;
    let support = support_analysis(&circuit)?;
    let verdict = g_family_verdict(graph, lead_resistance)?;
    let condition_b = !support.dead_edges.is_empty();
    let probes = support
        .probes
        .iter()
        .map(|p| ProbeReport {
            terminal_voltages: p.terminal_voltages.iter().map(fraction_string).collect(),
            currents: p.currents.iter().map(fraction_string).collect(),
        })
        .collect();
    Ok(CircuitReport {
        terminals: circuit.terminals.clone(),
        dead_edges: support.dead_edges.clone(),
        exists_full_support: !verdict.condition_a && !condition_b,
        condition_a: verdict.condition_a,
        reason: verdict.reason,
        criterion: verdict.criterion,
        a_min: support.a_min.as_ref().map(fraction_string),
        a_max: support.a_max.as_ref().map(fraction_string),
        a_min_value: support.a_min.as_ref().and_then(|r| r.to_f64()),
        a_max_value: support.a_max.as_ref().and_then(|r| r.to_f64()),
        probes,
    })
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
