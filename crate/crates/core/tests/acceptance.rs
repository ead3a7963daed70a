//! Acceptance criteria, one test each. Run with `--nocapture` to see the
//! measured values behind every verdict.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qgraph::analytic;
use qgraph::circuit::{g_family_verdict, support_analysis, CircuitModel};
use qgraph::coloring::{averaged_yang, binomial_identity_check, edge_counts, enumerate_admissible};
use qgraph::fem::{assemble, build_mesh, eigenvalues_below, graph_eigenvalues, solve_graph};
use qgraph::fixtures;
use qgraph::graph::{BoundaryCondition::Dirichlet, PotentialSpec};
use qgraph::inequality::*;
use qgraph::report::{reports_to_csv, reports_to_json, InequalityReport};
use qgraph::suite::{run_suite, SuiteOptions};
use qgraph::{MetricGraph, VertexId};

fn within(start: Instant, limit: Duration) {
    let spent = start.elapsed();
    println!("  runtime {spent:.2?} (limit {limit:?})");
    assert!(spent < limit, "took {spent:?}, limit {limit:?}");
}

fn all_pass(reports: &[InequalityReport]) {
    for r in reports {
        assert!(r.passed(), "{}", r.summary_line());
    }
}

fn lt_quotients(graph: &MetricGraph, h: f64) -> (f64, f64) {
    let mesh = build_mesh(graph, h).unwrap();
    let system = assemble(&mesh, graph);
    let negative = eigenvalues_below(&system, 0.0).unwrap();
    let q = |gamma| lt_quotient(&negative, &system, graph, gamma).unwrap().quotient;
    (q(1.5), q(2.0))
}

fn random_well_tree(rng: &mut ChaCha8Rng, edges: usize) -> MetricGraph {
    let tree = fixtures::random_tree(rng, edges, 0.3, 3.0);
    let edge = rng.gen_range(0..edges);
    let depth = rng.gen_range(2.0..8.0);
    fixtures::with_square_well(&tree, edge, depth)
}

#[test]
fn criterion_01_balloon_ratio() {
    let start = Instant::now();
    let oracle = analytic::balloon_ratio(PI).unwrap();
    let e = graph_eigenvalues(&fixtures::balloon(PI), 0.002, 2).unwrap();
    let fem = e[1] / e[0];
    println!("  oracle {oracle:.7}, fem {fem:.7}");
    assert!((oracle - 16.8453).abs() < 1e-3);
    assert!((fem - oracle).abs() / oracle < 5e-3);
    within(start, Duration::from_secs(10));
}

#[test]
fn criterion_02_balloon_sweep_peaks_near_pi() {
    let start = Instant::now();
    let lengths = linear_grid(0.5, 6.0, 56);
    let ratios: Vec<f64> = lengths
        .iter()
        .map(|&l| {
            let e = graph_eigenvalues(&fixtures::balloon(l), 0.01, 2).unwrap();
            e[1] / e[0]
        })
        .collect();
    let best = (0..56).max_by(|&a, &b| ratios[a].total_cmp(&ratios[b])).unwrap();
    let nearest = (0..56).min_by(|&a, &b| (lengths[a] - PI).abs().total_cmp(&(lengths[b] - PI).abs())).unwrap();
    println!("  argmax L = {:.4} (ratio {:.5}), nearest grid point to pi L = {:.4}", lengths[best], ratios[best], lengths[nearest]);
    assert_eq!(best, nearest);
    within(start, Duration::from_secs(120));
}

#[test]
fn criterion_03_fancy_balloon() {
    for n in [2usize, 3, 5, 10] {
        let closed = ((1.0 / (n as f64).sqrt()).atan() / PI).powi(2);
        let oracle = analytic::fancy_balloon_eigenvalues(n, 1).unwrap()[0];
        let fem = graph_eigenvalues(&fixtures::fancy_balloon(n), 0.005, 1).unwrap()[0];
        println!("  N = {n}: closed {closed:.9}, oracle {oracle:.9}, fem {fem:.9}");
        assert!((oracle - closed).abs() < 1e-12 * closed.max(1.0));
        assert!((fem - closed).abs() / closed < 5e-3);
    }
    let three = analytic::fancy_balloon_eigenvalues(3, 2).unwrap();
    assert!((three[0] - 1.0 / 36.0).abs() < 1e-12);
    assert!((three[1] / three[0] - 25.0).abs() < 1e-9);
    let e = graph_eigenvalues(&fixtures::fancy_balloon(50), 0.01, 2).unwrap();
    let scaled = e[1] / e[0] / (PI * PI * 50.0);
    println!("  N = 50: ratio/(pi^2 N) = {scaled:.5}");
    assert!((0.85..=1.0).contains(&scaled));
}

#[test]
fn criterion_04_poschl_teller_balloon_exceeds_classical() {
    let (q32, q2) = lt_quotients(&fixtures::poschl_teller_balloon(60.0), 0.005);
    println!("  Q(3/2) = {q32:.6} (classical {:.6}), Q(2) = {q2:.6} (classical {:.6})", 3.0 / 16.0, 8.0 / (15.0 * PI));
    assert!((q32 - 3.0 / 11.0).abs() < 1e-3);
    assert!((q2 - 0.2009).abs() < 1e-3);
    assert!(q32 > analytic::classical_constant(1.5));
    assert!(q2 > analytic::classical_constant(2.0));
    assert!((analytic::classical_constant(2.0) - 8.0 / (15.0 * PI)).abs() < 1e-12);
}

#[test]
fn criterion_05_same_well_on_an_interval_stays_classical() {
    let (q32, _) = lt_quotients(&fixtures::poschl_teller_interval(60.0), 0.005);
    println!("  Q(3/2) = {q32:.6}");
    assert!(q32 <= 3.0 / 16.0 + 1e-3);
}

#[test]
fn criterion_06_random_tree_yang_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let h = 0.01;
    let mut worst = f64::INFINITY;
    let mut deviation: f64 = 0.0;
    for i in 0..50 {
        let edges = rng.gen_range(3..=10);
        let graph = if i % 2 == 0 { fixtures::random_tree(&mut rng, edges, 0.3, 3.0) } else { random_well_tree(&mut rng, edges) };
        let (_, spectrum) = solve_graph(&graph, h, 40).unwrap();
        let trusted = trusted_eigenvalues(&spectrum.eigenvalues, graph.alpha(), h);
        let zs = default_z_grid(trusted, 40);
        let yang = yang_check(&spectrum.eigenvalues, &spectrum.gradient_norms(), graph.alpha(), &zs, FEM_TOL).unwrap();
        assert!(yang.passed(), "tree {i}: {}", yang.summary_line());
        let colorings = enumerate_admissible(&graph).unwrap();
        let avg = averaged_yang(&graph, &spectrum, &colorings, &zs, FEM_TOL).unwrap();
        assert!(avg.max_relative_deviation <= 1e-10, "tree {i}: deviation {}", avg.max_relative_deviation);
        worst = worst.min(yang.worst_margin);
        deviation = deviation.max(avg.max_relative_deviation);
    }
    println!("  worst yang margin {worst:.3e}, largest averaging deviation {deviation:.3e}");
}

#[test]
fn criterion_07_stubbe_monotonicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let alphas = geometric_grid(0.125, 16.0, 8);
    for i in 0..10 {
        let edges = rng.gen_range(2..=8);
        let graph = random_well_tree(&mut rng, edges);
        let r = stubbe_monotonicity(&graph, &alphas, 0.005, 1e-6).unwrap();
        assert!(r.passed(), "instance {i}: {}", r.summary_line());
        let bound = &r.values["bound_margin"];
        assert!(bound.iter().all(|&m| m > 0.0), "instance {i}: {bound:?}");
        println!("  instance {i}: values {:?}", r.values["value"].iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>());
    }
}

#[test]
fn criterion_08_one_loop_shifted_inequalities() {
    let well = PotentialSpec::SquareWell { depth: 2.0, left: 0.25 * PI, right: 0.75 * PI };
    let graph = fixtures::loop_with_leads(PI, 5.0, Some(well));
    let h = 0.01;
    let (_, spectrum) = solve_graph(&graph, h, 90).unwrap();
    let e1 = spectrum.eigenvalues[0];
    let alphas = geometric_grid(0.25, 4.0, 6);
    let zs = linear_grid(e1, e1.max(0.0) + e1.abs() + 1.0, 6);
    let r = one_loop_shifted_check(&graph, &alphas, &zs, h, FEM_TOL).unwrap();
    assert_eq!(r.grid.len(), 36);
    assert!(r.passed(), "{}", r.summary_line());
    println!("  {}", r.summary_line());

    let trusted = trusted_eigenvalues(&spectrum.eigenvalues, graph.alpha(), h);
    let top = trusted[trusted.len() - 1];
    for z in linear_grid(e1 + 0.02 * (top - e1), top, 5) {
        let r = sum_rule_steps_check(&spectrum, &graph, z, FEM_TOL).unwrap();
        assert!(r.passed(), "z = {z}: {}", r.summary_line());
        println!("  z = {z:.4}: {}", r.summary_line());
    }
}

fn riesz_family(eigenvalues: &[f64], total_length: f64, tol: f64) -> Vec<InequalityReport> {
    let zs = geometric_grid(0.5 * eigenvalues[0], eigenvalues[eigenvalues.len() - 1], 60);
    let js: Vec<usize> = [1, 2, 3, 5, 10, 20, 40, 60, 100, 250, 500].into_iter().filter(|&j| j <= eigenvalues.len()).collect();
    let mut reports = riesz_suite(eigenvalues, total_length, &zs, &js, tol).unwrap();
    reports.push(mean_ratio_bounds(eigenvalues, &mean_ratio_pairs(eigenvalues.len()), tol).unwrap());
    reports
}

#[test]
fn criterion_09_riesz_suite() {
    let interval = analytic::interval_eigenvalues(1.0, analytic::IntervalBc::DD, 500).unwrap();
    let reports = riesz_family(&interval, 1.0, ANALYTIC_TOL);
    assert_eq!(reports.len(), 6);
    all_pass(&reports);

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let edges = rng.gen_range(2..=8);
        let graph = fixtures::random_tree(&mut rng, edges, 0.3, 3.0);
        let e = graph_eigenvalues(&graph, 0.005, 90).unwrap();
        let reports = riesz_family(&e[..60], graph.total_length(), FEM_TOL);
        all_pass(&reports);
    }
}

#[test]
fn criterion_10_weyl_law() {
    let graphs = [
        ("interval", fixtures::interval(1.0, Dirichlet, Dirichlet)),
        ("y-graph", fixtures::star(&[1.0, 1.5, 2.0])),
        ("balloon", fixtures::balloon(PI)),
    ];
    for (name, graph) in graphs {
        let e = graph_eigenvalues(&graph, 0.002, 60).unwrap();
        let r = weyl_check(&e, graph.total_length(), &[60], 0.05).unwrap();
        let ratio = e[59].sqrt() * graph.total_length() / (60.0 * PI);
        println!("  {name}: sqrt(E_60)|G|/(60 pi) = {ratio:.5}");
        assert!((0.95..=1.05).contains(&ratio));
        assert!(r.passed(), "{name}: {}", r.summary_line());
    }
}

#[test]
fn criterion_11_colorings() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..200 {
        let edges = rng.gen_range(1..=12);
        let tree = fixtures::random_tree(&mut rng, edges, 0.3, 3.0);
        let colorings = enumerate_admissible(&tree).unwrap();
        assert!(edge_counts(&colorings, edges).uniform, "tree {i}");
    }
    let y = enumerate_admissible(&fixtures::star(&[1.0, 1.5, 2.0])).unwrap();
    assert_eq!(y.len(), 4);
    assert_eq!(edge_counts(&y, 3).counts, [2, 2, 2]);
    for m in 2..=10usize {
        let star = enumerate_admissible(&fixtures::star(&vec![1.0; m])).unwrap();
        assert_eq!(star.len(), 1 << (m - 1), "m = {m}");
        assert!(edge_counts(&star, m).counts.iter().all(|&c| c == 1 << (m - 2)), "m = {m}");
    }
    let (rows, ok) = binomial_identity_check(60);
    assert_eq!((rows[0].n, rows[rows.len() - 1].n), (2, 60));
    assert!(ok);
}

#[test]
fn criterion_12_circuits() {
    let balanced = fixtures::wheatstone_bridge([1.0, 2.0, 1.0, 2.0], 1.0, 1.0);
    let s = support_analysis(&CircuitModel::from_graph(&balanced, None, None).unwrap()).unwrap();
    assert_eq!(s.dead_edges, [5]);
    assert!(s.probes.iter().all(|p| p.currents[5] == num_rational::BigRational::from_integer(0.into())));
    assert!(!g_family_verdict(&balanced, None).unwrap().exists_full_support);
    for arm in 0..4 {
        let mut arms = [1.0, 2.0, 1.0, 2.0];
        arms[arm] *= 1.5;
        let g = fixtures::wheatstone_bridge(arms, 1.0, 1.0);
        let s = support_analysis(&CircuitModel::from_graph(&g, None, None).unwrap()).unwrap();
        assert!(s.dead_edges.is_empty(), "arm {arm}: {:?}", s.dead_edges);
    }

    let balloon = fixtures::balloon(PI);
    let single = CircuitModel::from_graph(&balloon, Some(&[VertexId(1)]), None).unwrap();
    assert!(support_analysis(&single).unwrap().dead_edges.contains(&0));
    let verdict = g_family_verdict(&balloon, None).unwrap();
    assert!(verdict.condition_a && !verdict.exists_full_support);

    assert!(g_family_verdict(&fixtures::star(&[1.0, 1.5, 2.0]), None).unwrap().exists_full_support);
    let (hash, _) = fixtures::hash_graph(2, 2, 1.0, 0.5);
    assert!(g_family_verdict(&hash, None).unwrap().exists_full_support);
}

#[test]
fn criterion_13_verify_is_deterministic() {
    let graphs = [
        fixtures::caterpillar(&[1.0, 1.3, 0.9, 1.1], &[0.7, 1.2, 0.5]),
        fixtures::poschl_teller_balloon(60.0),
        fixtures::loop_with_leads(PI, 5.0, Some(PotentialSpec::SquareWell { depth: 2.0, left: 0.25 * PI, right: 0.75 * PI })),
    ];
    let options = SuiteOptions { h: 0.02, ..Default::default() };
    for g in &graphs {
        let a = run_suite(g, &options).unwrap();
        let b = run_suite(g, &options).unwrap();
        assert_eq!(reports_to_csv(&a).as_bytes(), reports_to_csv(&b).as_bytes());
        assert_eq!(reports_to_json(&a).as_bytes(), reports_to_json(&b).as_bytes());
    }
}
