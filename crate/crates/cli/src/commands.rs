use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use rayon::prelude::*;
use serde_json::json;

use qgraph::analytic::{self, IntervalBc, Level};
use qgraph::circuit::circuit_report;
use qgraph::coloring::{binomial_identity_check, edge_counts, enumerate_admissible, realize_g};
use qgraph::fem::{eigenfunction_samples, graph_eigenvalues, solve_graph};
use qgraph::inequality::{geometric_grid, linear_grid, negative_eigenvalues, shifted_negative_integral, stubbe_values};
use qgraph::io::read_graph_file;
use qgraph::report::{format_float, reports_to_csv, reports_to_json, Expectation};
use qgraph::suite::{corrupt_spectrum, run_suite, SuiteOptions};
use qgraph::{fixtures, MetricGraph, VertexId};

use crate::args::*;
use crate::error::CliError;
use crate::output::Sink;
use crate::table::{pretty, Cell, Table};

fn load(global: &GlobalArgs) -> Result<(MetricGraph, BTreeMap<String, Expectation>), CliError> {
    let path = global.graph.as_deref().ok_or_else(|| CliError::Input("this subcommand needs --graph".into()))?;
    Ok(read_graph_file(Path::new(path))?)
}

fn check_positive(name: &str, x: f64) -> Result<(), CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(CliError::Input(format!("--{name} must be positive, got {x}")))
    }
}

pub fn spectrum(global: &GlobalArgs, sink: &Sink) -> Result<(), CliError> {
    let (graph, _) = load(global)?;
    let (system, mut spectrum) = solve_graph(&graph, global.h, global.k)?;
    if global.corrupt_spectrum {
        corrupt_spectrum(&mut spectrum);
    }
    for (j, e) in spectrum.eigenvalues.iter().enumerate() {
        sink.summary(&format!("E_{} = {}", j + 1, format_float(*e)));
    }
    let ratio = (spectrum.len() >= 2).then(|| spectrum.ratio(1, 0));
    if let Some(r) = ratio {
        sink.summary(&format!("E_2/E_1 = {}", format_float(r)));
    }

    let mut values = Table::new(&["index", "eigenvalue"]);
    for (j, e) in spectrum.eigenvalues.iter().enumerate() {
        values.push(vec![(j + 1).into(), (*e).into()]);
    }
    let mut functions = Table::new(&["mode", "edge", "s", "value"]);
    for (j, x) in spectrum.eigenvectors.iter().enumerate() {
        for (edge, samples) in eigenfunction_samples(&system.mesh, x) {
            for (s, v) in samples {
                functions.push(vec![(j + 1).into(), edge.0.into(), s.into(), v.into()]);
            }
        }
    }
    if sink.is_json() {
        let body = json!({
            "eigenvalues": values.to_json_value(),
            "ratio": ratio.map(qgraph::report::json_number),
            "eigenfunctions": functions.to_json_value(),
        });
        sink.file("spectrum.json", &pretty(&body))
    } else {
        sink.file("spectrum.csv", &values.to_csv())?;
        sink.file("eigenfunctions.csv", &functions.to_csv())
    }
}

pub fn verify(global: &GlobalArgs, sink: &Sink) -> Result<(), CliError> {
    let (graph, expectations) = load(global)?;
    let options = SuiteOptions {
        h: global.h,
        k: global.k,
        tol: global.tol,
        expectations,
        spectrum_hook: global.corrupt_spectrum.then_some(corrupt_spectrum as fn(&mut _)),
    };
    let reports = run_suite(&graph, &options)?;
    let body = if sink.is_json() { reports_to_json(&reports) + "\n" } else { reports_to_csv(&reports) };
    sink.data("verify", &body)?;
    for r in &reports {
        sink.summary(&r.summary_line());
        for note in &r.notes {
            sink.summary(&format!("  note: {note}"));
        }
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.check.as_str()).collect();
    sink.summary(&format!("{} checks, {} failed", reports.len(), failed.len()));
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::CheckFailed(format!("failed checks: {}", failed.join(", "))))
    }
}

fn worker_rows<T: Send, F>(points: &[T], row: F) -> Result<Vec<Vec<Cell>>, CliError>
where
    T: Sync,
    F: Fn(&T) -> Result<Vec<Cell>, CliError> + Sync + Send,
{
    // ordered by parameter index regardless of completion order
    points.par_iter().map(row).collect()
}

pub fn sweep(global: &GlobalArgs, args: &SweepArgs, sink: &Sink) -> Result<(), CliError> {
    if !(args.from <= args.to) {
        return Err(CliError::Input(format!("sweep range [{}, {}] is not ascending", args.from, args.to)));
    }
    check_positive("h", global.h)?;
    let table = match args.family {
        SweepFamily::Balloon => {
            check_positive("from", args.from)?;
            if args.steps == 0 {
                return Err(CliError::Input("--steps must be at least 1".into()));
            }
            let lengths = linear_grid(args.from, args.to, args.steps);
            let rows = worker_rows(&lengths, |&l| {
                let e = graph_eigenvalues(&fixtures::balloon(l), global.h, 2)?;
                let oracle = analytic::balloon_ratio(l)?;
                Ok(vec![l.into(), e[0].into(), e[1].into(), (e[1] / e[0]).into(), oracle.into()])
            })?;
            let mut t = Table::new(&["L", "E1", "E2", "ratio", "oracle_ratio"]);
            rows.into_iter().for_each(|r| t.push(r));
            let best = t
                .rows
                .iter()
                .max_by(|a, b| num(&a[3]).total_cmp(&num(&b[3])))
                .map(|r| (num(&r[0]), num(&r[3])));
            if let Some((l, r)) = best {
                sink.summary(&format!("largest ratio {} at L = {}", format_float(r), format_float(l)));
            }
            t
        }
        SweepFamily::Fancy => {
            let lo = args.from.ceil().max(1.0) as usize;
            let hi = args.to.floor() as usize;
            let ns: Vec<usize> = (lo..=hi).collect();
            let rows = worker_rows(&ns, |&n| {
                let e = graph_eigenvalues(&fixtures::fancy_balloon(n), global.h, 2)?;
                let oracle = analytic::fancy_balloon_eigenvalues(n, 1)?[0];
                let ratio = e[1] / e[0];
                Ok(vec![n.into(), e[0].into(), e[1].into(), ratio.into(), (ratio / (PI * PI * n as f64)).into(), oracle.into()])
            })?;
            let mut t = Table::new(&["N", "E1", "E2", "ratio", "ratio_over_pi2_n", "oracle_e1"]);
            rows.into_iter().for_each(|r| t.push(r));
            t
        }
        SweepFamily::Alpha => {
            check_positive("from", args.from)?;
            let (graph, _) = load(global)?;
            let alphas = geometric_grid(args.from, args.to, args.steps.max(1));
            let negatives: Vec<Vec<f64>> = alphas
                .par_iter()
                .map(|&a| negative_eigenvalues(&graph.with_alpha(a), global.h))
                .collect::<Result<_, _>>()?;
            let values = stubbe_values(&alphas, &negatives);
            let bound = analytic::classical_constant(2.0) * shifted_negative_integral(&graph, 0.0, 2.5);
            let mut t = Table::new(&["alpha", "negative_count", "e1", "stubbe", "classical_bound"]);
            for ((a, neg), v) in alphas.iter().zip(&negatives).zip(&values) {
                let e1 = neg.first().copied().unwrap_or(0.0);
                t.push(vec![(*a).into(), neg.len().into(), e1.into(), (*v).into(), bound.into()]);
            }
            let monotone = values.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-6));
            sink.summary(&format!("stubbe column nonincreasing: {monotone}"));
            t
        }
    };
    let body = if sink.is_json() { pretty(&table.to_json_value()) } else { table.to_csv() };
    sink.data("sweep", &body)
}

fn num(c: &Cell) -> f64 {
    match c {
        Cell::Num(x) => *x,
        Cell::Int(i) => *i as f64,
        Cell::Text(_) => f64::NAN,
    }
}

fn level_table(levels: &[Level]) -> Table {
    let mut t = Table::new(&["index", "energy", "k", "family", "multiplicity"]);
    for (i, l) in levels.iter().enumerate() {
        let family = format!("{:?}", l.family).to_lowercase();
        t.push(vec![(i + 1).into(), l.energy.into(), l.k.into(), family.into(), l.multiplicity.into()]);
    }
    t
}

pub fn oracle(global: &GlobalArgs, args: &OracleArgs, sink: &Sink) -> Result<(), CliError> {
    let count = args.count.unwrap_or(global.k);
    let table = match args.kind {
        OracleKind::Interval => {
            let bc = match args.ends {
                IntervalEnds::Dd => IntervalBc::DD,
                IntervalEnds::Dn => IntervalBc::DN,
            };
            let mut t = Table::new(&["index", "energy"]);
            for (i, e) in analytic::interval_eigenvalues(args.length, bc, count)?.iter().enumerate() {
                t.push(vec![(i + 1).into(), (*e).into()]);
            }
            t
        }
        OracleKind::Balloon => {
            sink.summary(&format!("E_2/E_1 = {}", format_float(analytic::balloon_ratio(args.length)?)));
            level_table(&analytic::balloon_levels(args.length, count)?)
        }
        OracleKind::Fancy => {
            let e = analytic::fancy_balloon_eigenvalues(args.edges, 2)?;
            sink.summary(&format!("E_1 = {}, E_2/E_1 = {}", format_float(e[0]), format_float(e[1] / e[0])));
            level_table(&analytic::fancy_balloon_levels(args.edges, count)?)
        }
        OracleKind::PoschlTeller => {
            let pt = analytic::poschl_teller_balloon();
            let mut t = Table::new(&["quantity", "value"]);
            for (name, v) in [
                ("a", pt.a),
                ("e1", pt.e1),
                ("q_three_halves", pt.q_three_halves),
                ("q_three_halves_closed", pt.q_three_halves_closed),
                ("classical_three_halves", analytic::classical_constant(1.5)),
                ("q_two", pt.q_two),
                ("q_two_closed", pt.q_two_closed),
                ("classical_two", analytic::classical_constant(2.0)),
            ] {
                t.push(vec![name.into(), v.into()]);
            }
            t
        }
        OracleKind::Classical => {
            let mut t = Table::new(&["gamma", "classical_constant"]);
            t.push(vec![args.gamma.into(), analytic::classical_constant(args.gamma).into()]);
            t
        }
    };
    let body = if sink.is_json() { pretty(&table.to_json_value()) } else { table.to_csv() };
    sink.data("oracle", &body)
}

pub fn colorings(global: &GlobalArgs, args: &ColoringArgs, sink: &Sink) -> Result<(), CliError> {
    let (graph, _) = load(global)?;
    let colorings = enumerate_admissible(&graph)?;
    let counts = edge_counts(&colorings, graph.edge_count());
    sink.summary(&format!("admissible colorings: {}", colorings.len()));
    sink.summary(&format!("a(e) = {:?}, uniform: {}", counts.counts, counts.uniform));

    let mut per_edge = Table::new(&["edge", "a_e"]);
    for (e, c) in counts.counts.iter().enumerate() {
        per_edge.push(vec![e.into(), (*c as usize).into()]);
    }
    let mut listing = Table::new(&["coloring", "mask", "edge", "slope", "value_from", "value_to"]);
    if args.list_g {
        for (i, c) in colorings.iter().enumerate() {
            let g = realize_g(&graph, c)?;
            for (edge, slope, from, to) in g.listing(&graph) {
                listing.push(vec![i.into(), (c.mask as usize).into(), edge.0.into(), Cell::Int(slope.into()), from.into(), to.into()]);
            }
        }
    }
    let mut binomial = Table::new(&["n", "even", "odd"]);
    let mut binomial_ok = None;
    if let Some(n_max) = args.binomial {
        if !(2..=60).contains(&n_max) {
            return Err(CliError::Input(format!("--binomial must lie in 2..=60, got {n_max}")));
        }
        let (rows, ok) = binomial_identity_check(n_max);
        for r in rows {
            binomial.push(vec![(r.n as usize).into(), r.even.to_string().into(), r.odd.to_string().into()]);
        }
        sink.summary(&format!("even/odd binomial identity up to n = {n_max}: {ok}"));
        binomial_ok = Some(ok);
    }

    if sink.is_json() {
        let mut body = json!({
            "count": colorings.len(),
            "uniform": counts.uniform,
            "counts": per_edge.to_json_value(),
            "masks": colorings.iter().map(|c| c.mask).collect::<Vec<_>>(),
        });
        if args.list_g {
            body["g_functions"] = listing.to_json_value();
        }
        if let Some(ok) = binomial_ok {
            body["binomial"] = binomial.to_json_value();
            body["binomial_identity"] = json!(ok);
        }
        sink.file("colorings.json", &pretty(&body))?;
    } else {
        sink.file("colorings.csv", &per_edge.to_csv())?;
        if args.list_g {
            sink.file("g_functions.csv", &listing.to_csv())?;
        }
        if binomial_ok.is_some() {
            sink.file("binomial.csv", &binomial.to_csv())?;
        }
    }
    if binomial_ok == Some(false) || !counts.uniform {
        return Err(CliError::CheckFailed("coloring identities failed".into()));
    }
    Ok(())
}

pub fn circuit(global: &GlobalArgs, args: &CircuitArgs, sink: &Sink) -> Result<(), CliError> {
    let (graph, _) = load(global)?;
    if let Some(r) = args.lead_resistance {
        check_positive("lead-resistance", r)?;
    }
    let terminals: Option<Vec<VertexId>> = args.terminals.as_ref().map(|t| t.iter().map(|&v| VertexId(v)).collect());
    if let Some(ts) = &terminals {
        if let Some(bad) = ts.iter().find(|v| v.0 >= graph.vertex_count()) {
            return Err(CliError::Input(format!("terminal {} is not a vertex", bad.0)));
        }
    }
    let report = circuit_report(&graph, terminals.as_deref(), args.lead_resistance)?;
    sink.summary(&format!("dead edges: {:?}", report.dead_edges));
    sink.summary(&format!("full-support G-family (conjectured criterion): {} ({})", report.exists_full_support, report.reason));
    let body = serde_json::to_value(&report).expect("circuit report serializes");
    if sink.is_json() {
        sink.file("circuit.json", &pretty(&body))
    } else {
        let mut t = Table::new(&["edge", "live", "probe", "current"]);
        for (p, probe) in report.probes.iter().enumerate() {
            for (e, current) in probe.currents.iter().enumerate() {
                let live = if report.dead_edges.contains(&e) { "dead" } else { "live" };
                t.push(vec![e.into(), live.into(), p.into(), current.clone().into()]);
            }
        }
        sink.file("circuit.csv", &t.to_csv())
    }
}
