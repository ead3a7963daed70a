//! Finite-element spectra against closed forms derived independently here,
//! plus the published reference numbers.

use std::f64::consts::PI;

use qgraph::analytic::{self, IntervalBc};
use qgraph::fem::graph_eigenvalues;
use qgraph::fixtures;
use qgraph::graph::{BoundaryCondition::*, GraphBuilder, PotentialSpec};
use qgraph::inequality::{riesz_mean, shifted_negative_integral};

fn assert_close(fem: &[f64], exact: &[f64], rel: f64) {
    assert_eq!(fem.len(), exact.len());
    for (j, (a, b)) in fem.iter().zip(exact).enumerate() {
        assert!((a - b).abs() <= rel * b.abs().max(1e-12), "E_{}: fem {a}, exact {b}", j + 1);
    }
}

/// Spectrum of an equilateral star with Dirichlet leaves: `cos kl = 0`
/// (simple) and `sin kl = 0` (multiplicity m - 1).
fn equilateral_star(m: usize, l: f64, count: usize) -> Vec<f64> {
    let mut out = Vec::new();
    for n in 0.. {
        let half = ((n as f64 + 0.5) * PI / l).powi(2);
        out.push(half);
        let whole = ((n + 1) as f64 * PI / l).powi(2);
        out.extend(std::iter::repeat(whole).take(m - 1));
        if out.len() >= count {
            break;
        }
    }
    out.sort_by(f64::total_cmp);
    out.truncate(count);
    out
}

#[test]
fn dirichlet_and_mixed_intervals() {
    let l = 2.5;
    let dd = graph_eigenvalues(&fixtures::interval(l, Dirichlet, Dirichlet), 0.002, 10).unwrap();
    let exact: Vec<f64> = (1..=10).map(|n| (n as f64 * PI / l).powi(2)).collect();
    assert_close(&dd, &exact, 2e-4);
    assert_close(&analytic::interval_eigenvalues(l, IntervalBc::DD, 10).unwrap(), &exact, 1e-14);

    let dn = graph_eigenvalues(&fixtures::interval(l, Dirichlet, Neumann), 0.002, 10).unwrap();
    let exact: Vec<f64> = (1..=10).map(|n| ((n as f64 - 0.5) * PI / l).powi(2)).collect();
    assert_close(&dn, &exact, 2e-4);
}

#[test]
fn fem_eigenvalues_bound_the_exact_ones_from_above() {
    let exact: Vec<f64> = (1..=8).map(|n| (n as f64).powi(2)).collect();
    let coarse = graph_eigenvalues(&fixtures::interval(PI, Dirichlet, Dirichlet), 0.05, 8).unwrap();
    let fine = graph_eigenvalues(&fixtures::interval(PI, Dirichlet, Dirichlet), 0.01, 8).unwrap();
    for j in 0..8 {
        assert!(coarse[j] >= fine[j] && fine[j] >= exact[j], "E_{}", j + 1);
    }
    // P1 elements converge at second order in h
    let ratio = (coarse[7] - exact[7]) / (fine[7] - exact[7]);
    assert!((20.0..30.0).contains(&ratio), "{ratio}");
}

#[test]
fn equilateral_stars_have_degenerate_levels() {
    for m in [3, 4, 6] {
        let fem = graph_eigenvalues(&fixtures::star(&vec![1.2; m]), 0.002, 12).unwrap();
        assert_close(&fem, &equilateral_star(m, 1.2, 12), 5e-4);
    }
}

#[test]
fn a_path_through_interior_vertices_is_an_interval() {
    let fem = graph_eigenvalues(&fixtures::path(&[0.4, 1.1, 0.7, 0.8]), 0.002, 8).unwrap();
    let exact: Vec<f64> = (1..=8).map(|n| (n as f64 * PI / 3.0).powi(2)).collect();
    assert_close(&fem, &exact, 2e-4);
}

#[test]
fn constant_potential_shifts_everything() {
    let mut b = GraphBuilder::new();
    let (u, v) = (b.dirichlet(), b.dirichlet());
    b.edge_with(u, v, PI, PotentialSpec::Sampled { values: vec![-0.75; 7] });
    let fem = graph_eigenvalues(&b.build(), 0.002, 6).unwrap();
    let exact: Vec<f64> = (1..=6).map(|n| (n * n) as f64 - 0.75).collect();
    assert_close(&fem, &exact, 2e-4);
}

#[test]
fn diffusion_constant_scales_the_spectrum() {
    let g = fixtures::star(&[1.0, 0.6, 1.7]);
    let one = graph_eigenvalues(&g, 0.005, 10).unwrap();
    let three = graph_eigenvalues(&g.with_alpha(3.0), 0.005, 10).unwrap();
    let scaled: Vec<f64> = one.iter().map(|e| 3.0 * e).collect();
    assert_close(&three, &scaled, 1e-10);
}

#[test]
fn balloon_matches_its_secular_equation() {
    for l in [1.0, PI, 4.5] {
        let fem = graph_eigenvalues(&fixtures::balloon(l), 0.002, 12).unwrap();
        let exact = analytic::balloon_eigenvalues(l, 12).unwrap();
        assert_close(&fem, &exact, 5e-4);
    }
}

#[test]
fn fancy_balloon_matches_its_levels() {
    for n in [2, 4, 7] {
        let fem = graph_eigenvalues(&fixtures::fancy_balloon(n), 0.004, 12).unwrap();
        let exact = analytic::expand(&analytic::fancy_balloon_levels(n, 12).unwrap());
        assert_close(&fem, &exact[..12], 5e-4);
        let c = (1.0 / (n as f64).sqrt()).atan() / PI;
        assert!((exact[0] - c * c).abs() < 1e-13);
    }
}

#[test]
fn poschl_teller_balloon_ground_state() {
    // the bound state is sech on the loop continued by exp(-a y) on the string
    let a = 0.5f64.atanh() / PI;
    let fem = graph_eigenvalues(&fixtures::poschl_teller_balloon(60.0), 0.005, 1).unwrap();
    assert!((fem[0] + a * a).abs() < 1e-4 * a * a, "{} vs {}", fem[0], -a * a);
}

#[test]
fn square_well_integrals_are_exact() {
    let g = fixtures::with_square_well(&fixtures::interval(2.0, Dirichlet, Dirichlet), 0, 3.0);
    // well of depth 3 on one unit of the edge, V = 0 on the other unit
    for (w, p) in [(0.0, 2.5), (0.5, 2.0), (-1.0, 1.5)] {
        let exact = (3.0f64 + w).powf(p) + w.max(0.0).powf(p);
        assert!((shifted_negative_integral(&g, w, p) - exact).abs() < 1e-12 * exact);
    }
}

#[test]
fn riesz_means_of_the_unit_interval() {
    let e = analytic::interval_eigenvalues(1.0, IntervalBc::DD, 200).unwrap();
    let z = 50.5 * PI * PI;
    let direct: f64 = (1..=7).map(|n| z - (n * n) as f64 * PI * PI).sum();
    assert!((riesz_mean(&e, z, 1.0) - direct).abs() < 1e-9 * direct);
    assert_eq!(riesz_mean(&e, e[0], 2.0), 0.0);
}

mod reference_values {
    use super::*;

    #[test]
    fn balloon_ratio() {
        assert!((analytic::balloon_ratio(PI).unwrap() - 16.8453).abs() < 1e-4);
    }

    #[test]
    fn fancy_balloon_with_three_edges() {
        let e = analytic::fancy_balloon_eigenvalues(3, 2).unwrap();
        assert!((e[0] - 1.0 / 36.0).abs() < 1e-14);
        assert!((e[1] / e[0] - 25.0).abs() < 1e-10);
    }

    #[test]
    fn poschl_teller_quotients() {
        let pt = analytic::poschl_teller_balloon();
        assert!((pt.a - 0.5f64.atanh() / PI).abs() < 1e-14);
        assert!((pt.q_three_halves - 3.0 / 11.0).abs() < 1e-9);
        assert!((pt.q_three_halves_closed - 3.0 / 11.0).abs() < 1e-12);
        assert!((pt.q_two - 0.2009).abs() < 1e-4);
        assert!((pt.q_two - pt.q_two_closed).abs() < 1e-9);
    }

    #[test]
    fn classical_constants() {
        assert!((analytic::classical_constant(1.5) - 3.0 / 16.0).abs() < 1e-14);
        assert!((analytic::classical_constant(2.0) - 8.0 / (15.0 * PI)).abs() < 1e-14);
        assert!((analytic::classical_constant(0.5) - 0.25).abs() < 1e-14);
    }
}
