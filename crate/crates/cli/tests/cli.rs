use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn qgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgraph")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

#[test]
fn balloon_spectrum_prints_ratio() {
    let g = fixture("balloon.json");
    let o = qgraph(&["spectrum", "--graph", g.to_str().unwrap(), "--k", "6", "--h", "0.005"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let line = stderr(&o).lines().find(|l| l.starts_with("E_2/E_1")).unwrap().to_string();
    let ratio: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!((ratio - 16.8453).abs() < 0.01, "{line}");
    let csv = stdout(&o);
    assert!(csv.starts_with("index,eigenvalue\n1,"), "{csv}");
}

#[test]
fn interval_spectrum_is_squares() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixture("interval.json");
    let o = qgraph(&["spectrum", "--graph", g.to_str().unwrap(), "--k", "4", "--h", "0.002", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    for (j, line) in csv.lines().skip(1).enumerate() {
        let e: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        let n = (j + 1) as f64;
        assert!((e - n * n).abs() < 1e-3 * n * n, "{line}");
    }
}

#[test]
fn malformed_file_exits_two_and_names_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"vertices": [{"id": 0, "colour": 1}], "edges": []}"#).unwrap();
    let o = qgraph(&["verify", "--graph", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colour"), "{}", stderr(&o));

    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(qgraph(&["spectrum", "--graph", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(qgraph(&["verify"]).status.code(), Some(2));
    assert_eq!(qgraph(&["verify", "--format", "xml"]).status.code(), Some(2));
}

#[test]
fn tree_fixture_is_green() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixture("y_graph.json");
    let o = qgraph(&["verify", "--graph", g.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(!out.contains("FAIL"), "{out}");
    for check in ["yang", "averaged_yang", "riesz_difference", "mean_ratio", "weyl"] {
        assert!(out.contains(&format!("PASS {check}:")), "{check} missing:\n{out}");
    }
}

#[test]
fn corrupted_spectrum_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixture("y_graph.json");
    let o = qgraph(&["verify", "--graph", g.to_str().unwrap(), "--corrupt-spectrum", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL yang"));
}

#[test]
fn poschl_teller_balloon_observes_expected_violations() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixture("poschl_teller_balloon.json");
    let o = qgraph(&["verify", "--graph", g.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    for gamma in ["1.5", "2"] {
        let needle = format!("PASS lt_quotient_gamma_{gamma}: violation observed (expected)");
        assert!(out.contains(&needle), "{out}");
    }
}

#[test]
fn expected_violation_that_holds_fails() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(fixture("poschl_teller_interval.json")).unwrap();
    let mut file: serde_json::Value = serde_json::from_str(&text).unwrap();
    file["expect"] = serde_json::json!({"lt_quotient_gamma_1.5": "violated"});
    let g = dir.path().join("g.json");
    std::fs::write(&g, file.to_string()).unwrap();
    let out = dir.path().join("out");
    let o = qgraph(&["verify", "--graph", g.to_str().unwrap(), "--out-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL lt_quotient_gamma_1.5: holds (violation expected)"));
}

#[test]
fn out_dir_receives_every_file_and_nothing_else_is_written() {
    let root = tempfile::tempdir().unwrap();
    let work = root.path().join("cwd");
    std::fs::create_dir(&work).unwrap();
    let out = root.path().join("out");
    let y = fixture("y_graph.json");
    let y = y.to_str().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["spectrum", "--graph", y, "--k", "3"],
        vec!["verify", "--graph", y, "--h", "0.02"],
        vec!["sweep", "balloon", "--from", "2", "--to", "4", "--steps", "3", "--h", "0.02"],
        vec!["oracle", "classical", "--gamma", "2"],
        vec!["colorings", "--graph", y, "--list-g", "--binomial", "10"],
        vec!["circuit", "--graph", y],
    ];
    for format in ["csv", "json"] {
        let dir = out.join(format);
        for run in &runs {
            let mut args = run.clone();
            args.extend(["--out-dir", dir.to_str().unwrap(), "--format", format]);
            let o = Command::new(env!("CARGO_BIN_EXE_qgraph")).args(&args).current_dir(&work).output().unwrap();
            assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        }
    }
    assert!(listing(&work).is_empty());
    assert_eq!(listing(root.path()), ["cwd", "out"]);
    assert_eq!(
        listing(&out.join("csv")),
        [
            "binomial.csv",
            "circuit.csv",
            "colorings.csv",
            "eigenfunctions.csv",
            "g_functions.csv",
            "oracle.csv",
            "spectrum.csv",
            "sweep.csv",
            "verify.csv"
        ]
    );
    assert_eq!(
        listing(&out.join("json")),
        ["circuit.json", "colorings.json", "oracle.json", "spectrum.json", "sweep.json", "verify.json"]
    );
    for name in listing(&out.join("json")) {
        let text = std::fs::read_to_string(out.join("json").join(&name)).unwrap();
        serde_json::from_str::<serde_json::Value>(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn verify_and_sweep_are_byte_identical_across_runs_and_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixture("caterpillar.json");
    let mut reports = Vec::new();
    for workers in ["1", "4"] {
        let out = dir.path().join(format!("w{workers}"));
        let out = out.to_str().unwrap();
        let o = qgraph(&["verify", "--graph", g.to_str().unwrap(), "--h", "0.02", "--workers", workers, "--out-dir", out]);
        assert_eq!(o.status.code(), Some(0));
        let o = qgraph(&["sweep", "balloon", "--from", "1", "--to", "5", "--steps", "9", "--h", "0.02", "--workers", workers, "--out-dir", out]);
        assert_eq!(o.status.code(), Some(0));
        reports.push((
            std::fs::read(dir.path().join(format!("w{workers}/verify.csv"))).unwrap(),
            std::fs::read(dir.path().join(format!("w{workers}/sweep.csv"))).unwrap(),
        ));
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn sweep_rows_follow_parameter_order() {
    let o = qgraph(&["sweep", "balloon", "--from", "0.5", "--to", "6", "--steps", "12", "--h", "0.02"]);
    assert_eq!(o.status.code(), Some(0));
    let ls: Vec<f64> = stdout(&o).lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(ls.len(), 12);
    assert!(ls.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn oracle_fancy_three() {
    let o = qgraph(&["oracle", "fancy", "--edges", "3", "--count", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("E_1 = 0.0277777777778, E_2/E_1 = 25.0000000000"), "{}", stderr(&o));
}

#[test]
fn circuit_reports_the_dead_bridge() {
    let g = fixture("wheatstone_balanced.json");
    let o = qgraph(&["circuit", "--graph", g.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dead_edges"], serde_json::json!([5]));
    assert_eq!(v["exists_full_support"], serde_json::json!(false));
    assert_eq!(v["criterion"], "conjectured");

    let g = fixture("wheatstone_unbalanced.json");
    let o = qgraph(&["circuit", "--graph", g.to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dead_edges"], serde_json::json!([]));
}

#[test]
fn bad_parameters_are_input_errors() {
    let g = fixture("y_graph.json");
    let g = g.to_str().unwrap();
    assert_eq!(qgraph(&["spectrum", "--graph", g, "--h", "-1"]).status.code(), Some(2));
    assert_eq!(qgraph(&["sweep", "balloon", "--from", "4", "--to", "1"]).status.code(), Some(2));
    assert_eq!(qgraph(&["circuit", "--graph", g, "--terminals", "0,99"]).status.code(), Some(2));
    assert_eq!(qgraph(&["spectrum", "--graph", g, "--workers", "0"]).status.code(), Some(2));
    let b = fixture("balloon.json");
    assert_eq!(qgraph(&["colorings", "--graph", b.to_str().unwrap()]).status.code(), Some(2));
}
