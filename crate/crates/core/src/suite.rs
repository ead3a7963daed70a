//! The check suite a graph gets, chosen from its topology.

use std::collections::BTreeMap;

use crate::coloring::{averaged_yang, enumerate_admissible};
use crate::error::{CheckError, SolverError};
use crate::fem::{eigenvalues_below, solve_graph, Spectrum};
use crate::graph::{MetricGraph, TopologyClass};
use crate::inequality::*;
use crate::report::{Expectation, InequalityReport};

/// Trees beyond this many edges skip the coloring-averaged Yang check.
pub const AVERAGING_EDGE_LIMIT: usize = 12;

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub h: f64,
    pub k: usize,
    /// Replaces the finite-element tolerance of every check.
    pub tol: Option<f64>,
    /// Per-check expectations that override the topology defaults.
    pub expectations: BTreeMap<String, Expectation>,
    /// Applied to the computed spectrum before any check sees it.
    pub spectrum_hook: Option<fn(&mut Spectrum)>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { h: 0.01, k: 90, tol: None, expectations: BTreeMap::new(), spectrum_hook: None }
    }
}

/// Stand-in report for a check that could not run on this graph.
fn skipped(check: &str, error: &CheckError) -> InequalityReport {
    InequalityReport::new(check, Vec::new())
        .expecting(Expectation::Informational)
        .judge(&[], 0.0)
        .note(format!("not run: {error}"))
}

fn is_path(graph: &MetricGraph) -> bool {
    graph.degrees().iter().all(|&d| d <= 2)
}

/// Runs every applicable check. Check-level problems (coverage, topology,
/// preconditions) become informational reports; only solver failures are
/// returned as errors.
pub fn run_suite(graph: &MetricGraph, options: &SuiteOptions) -> Result<Vec<InequalityReport>, SolverError> {
    let fem_tol = options.tol.unwrap_or(FEM_TOL);
    let (system, mut spectrum) = solve_graph(graph, options.h, options.k)?;
    if let Some(hook) = options.spectrum_hook {
        hook(&mut spectrum);
    }
    let eigenvalues = spectrum.eigenvalues.clone();
    let trusted = trusted_eigenvalues(&eigenvalues, graph.alpha(), options.h);
    let gradients = spectrum.gradient_norms();
    let class = graph.classify_topology().class;
    let tree = class == TopologyClass::Tree;
    let mut reports = Vec::new();
    let mut push = |r: Result<InequalityReport, CheckError>, name: &str, expected: Expectation| match r {
        Ok(r) => reports.push(r.expecting(expected)),
        Err(e) => reports.push(skipped(name, &e)),
    };

    let zs = default_z_grid(trusted, 40);
    let yang_expectation = if tree { Expectation::Holds } else { Expectation::Informational };
    push(yang_check(&eigenvalues, &gradients, graph.alpha(), &zs, fem_tol), "yang", yang_expectation);

    if tree {
        if graph.edge_count() <= AVERAGING_EDGE_LIMIT {
            let r = enumerate_admissible(graph)
                .map_err(|e| CheckError::Precondition(e.to_string()))
                .and_then(|cs| {
                    averaged_yang(graph, &spectrum, &cs, &zs, fem_tol)
                        .map_err(|e| CheckError::Precondition(e.to_string()))
                })
                .map(|a| {
                    let deviation = a.max_relative_deviation;
                    a.report.note(format!("coloring average matches p*S(z) to relative {deviation:.3e}"))
                });
            push(r, "averaged_yang", Expectation::Holds);
        }
        if !graph.has_potential() && trusted[0] > 0.0 {
            let zs = geometric_grid(0.5 * trusted[0], trusted[trusted.len() - 1], 40);
            let js: Vec<usize> = [1, 2, 3, 5, 10, 20, 30, 40, 50, 60].into_iter().filter(|&j| j <= trusted.len()).collect();
            match riesz_suite_for_graph(graph, trusted, &zs, &js, fem_tol) {
                Ok(rs) => rs.into_iter().for_each(|r| push(Ok(r), "riesz", Expectation::Holds)),
                Err(e) => push(Err(e), "riesz", Expectation::Holds),
            }
            push(mean_ratio_bounds(trusted, &mean_ratio_pairs(trusted.len()), fem_tol), "mean_ratio", Expectation::Holds);
            let n = trusted.len().min(60);
            push(weyl_check(&trusted[..n], graph.total_length(), &[n], 0.05), "weyl", Expectation::Holds);
        }
    }

    if class == TopologyClass::OneLoopWithLeads {
        let alphas = geometric_grid(0.25, 4.0, 6);
        let e1 = eigenvalues[0];
        let loop_zs = linear_grid(e1, e1.max(0.0) + e1.abs() + 1.0, 6);
        push(one_loop_shifted_check(graph, &alphas, &loop_zs, options.h, fem_tol), "one_loop_shifted", Expectation::Holds);
        let top = trusted[trusted.len() - 1];
        let step_zs = linear_grid(e1 + 0.02 * (top - e1), top, 5);
        for (i, &z) in step_zs.iter().enumerate() {
            let r = sum_rule_steps_check(&spectrum, graph, z, fem_tol).map(|mut r| {
                r.check = format!("sum_rule_steps_{i}");
                r
            });
            push(r, &format!("sum_rule_steps_{i}"), Expectation::Holds);
        }
    }

    if graph.has_potential() {
        let negatives = eigenvalues_below(&system, 0.0)?;
        for gamma in [1.5, 2.0] {
            let expected = match (tree, gamma == 2.0 || is_path(graph)) {
                (true, true) => Expectation::Holds,
                _ => Expectation::Informational,
            };
            let r = lt_quotient(&negatives, &system, graph, gamma).map(|q| q.report(false, fem_tol));
            push(r, &format!("lt_quotient_gamma_{gamma}"), expected);
        }
        let alphas = geometric_grid(0.125, 16.0, 8);
        let expected = if tree { Expectation::Holds } else { Expectation::Informational };
        push(stubbe_monotonicity(graph, &alphas, options.h, options.tol.unwrap_or(1e-6)), "stubbe_monotonicity", expected);
    }

    for r in &mut reports {
        if let Some(&e) = options.expectations.get(&r.check) {
            r.expected = e;
        }
    }
    Ok(reports)
}

/// Multiplies the `j`-th eigenvalue (1-based) by `j⁴`. Pushes the
/// eigenvalue means far past any admissible growth; test use only.
pub fn corrupt_spectrum(spectrum: &mut Spectrum) {
    for (i, e) in spectrum.eigenvalues.iter_mut().enumerate() {
        *e *= ((i + 1) as f64).powi(4);
    }
}
