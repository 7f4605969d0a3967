//! End-to-end tests of the `msd` command line.

use std::fs;
use std::process::Command;

use msd_core::cli;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("msd").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const EQ8_FILE: &str = "# 3-qubit stabilizer code\nformat: stabilizer\nn: 3\ngenerators: ZIZ, XZX\nlogical_z: XXY\nlogical_x: IXZ\n";

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn field<'a>(text: &'a str, label: &str) -> &'a str {
    text.lines().find_map(|l| l.trim().strip_prefix(label)).unwrap_or_else(|| panic!("no `{label}` in\n{text}")).trim()
}

#[test]
fn analyze_reports_equatorial_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "eq8.code", EQ8_FILE);
    let (code, out, err) = run(&["analyze", &path]);
    assert_eq!(code, 0, "{err}");
    let threshold: f64 = field(&out, "threshold:").parse().unwrap();
    assert!((threshold - 0.276921).abs() < 1e-5, "{out}");
    assert_eq!(field(&out, "tight:"), "true");
    let canon: Vec<f64> =
        field(&out, "canonical:").trim_matches(|c| c == '(' || c == ')').split(", ").map(|v| v.parse().unwrap()).collect();
    assert!((canon[0] - 0.83929).abs() < 1e-4 && (canon[1] - 0.54369).abs() < 1e-4 && canon[2].abs() < 1e-6, "{out}");
    assert!(out.contains("verdict: distiller"));
}

#[test]
fn analyze_full_depolarization_gives_maximally_mixed_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "eq8.code", EQ8_FILE);
    let (code, out, _) = run(&["analyze", &path, "--p", "1.0", "--samples", "10"]);
    assert_eq!(code, 0);
    let line = out.lines().find(|l| l.contains("one round at p")).unwrap();
    assert!(line.contains("output (0.000000, 0.000000, 0.000000), p_success 0.250000"), "{line}");
}

#[test]
fn analyze_json_is_machine_readable() {
    let (code, out, _) = run(&["analyze", "golden_3qubit_cws", "--json", "--samples", "50"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "distiller");
    let thr = v["fixed_points"][0]["threshold"].as_f64().unwrap();
    assert!((thr - 0.287843).abs() < 1e-5);
}

#[test]
fn malformed_generator_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(&dir, "bad.code", &EQ8_FILE.replace("XZX", "XQZ"));
    let (code, _, err) = run(&["analyze", &path]);
    assert_eq!(code, 1);
    assert!(err.contains("'Q'") && err.contains("line 4"), "{err}");

    let (code, _, err) = run(&["analyze", "no_such_code"]);
    assert_eq!(code, 1);
    assert!(err.contains("no_such_code"));

    let (code, _, _) = run(&["analyze", "golden_3qubit_cws", "--p", "1.5"]);
    assert_eq!(code, 1);
}

fn csv_rows(out: &str) -> Vec<Vec<String>> {
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some(cli::CSV_HEADER));
    lines.map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn three_qubit_search_finds_the_golden_code() {
    let (code, out, err) = run(&["search", "--n", "3", "--samples", "200"]);
    assert_eq!(code, 0, "{err}");
    let rows = csv_rows(&out);
    let hit = rows.iter().any(|r| {
        let c: Vec<f64> = r[7..10].iter().map(|v| v.parse().unwrap()).collect();
        (c[0] - 0.786151).abs() < 1e-4 && (c[1] - 0.618034).abs() < 1e-4 && c[2].abs() < 1e-4 && r[12] == "true"
    });
    assert!(hit, "{out}");
    assert!(err.contains("examined 56 codes"), "{err}");
}

#[test]
fn search_rows_respect_the_octahedron_bound() {
    let (code, out, _) = run(&["search", "--n", "2,3", "--samples", "100", "--corrections"]);
    assert_eq!(code, 0);
    for r in csv_rows(&out) {
        let threshold: f64 = r[10].parse().unwrap();
        let p_oct: f64 = r[11].parse().unwrap();
        assert!(threshold <= p_oct + 1e-6, "{r:?}");
        let c: Vec<f64> = r[7..10].iter().map(|v| v.parse().unwrap()).collect();
        let l1: f64 = c.iter().map(|v| v.abs()).sum();
        assert!((p_oct - (1.0 - 1.0 / l1)).abs() < 1e-5, "{r:?}");
    }
}

#[test]
fn search_is_reproducible_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    for (p, threads) in [(&a, "1"), (&b, "2")] {
        let (code, _, err) =
            run(&["search", "--n", "3", "--samples", "50", "--dedupe", "--threads", threads, "--out", p.to_str().unwrap()]);
        assert_eq!(code, 0, "{err}");
    }
    let (ta, tb) = (fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let first: serde_json::Value = serde_json::from_str(std::str::from_utf8(&ta).unwrap().lines().next().unwrap()).unwrap();
    assert!(first["threshold"].is_number());

    let (code, _, err) = run(&["search", "--n", "3", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(code, 1);
    assert!(err.contains("nonexistent-dir"), "{err}");

    let (code, _, _) = run(&["search", "--n", "7"]);
    assert_eq!(code, 1);
}

fn yield_at(code: &str, p: &str) -> f64 {
    let grid = format!("{p}:{p}:0.01");
    let (status, out, err) = run(&["yield", code, "--p-grid", &grid]);
    assert_eq!(status, 0, "{err}");
    let row = out.lines().find(|l| l.starts_with(&format!("{p}"))).unwrap_or_else(|| panic!("{out}"));
    let cols: Vec<&str> = row.split(',').collect();
    assert_eq!(cols[3], "ok", "{row}");
    cols[1].parse().unwrap()
}

#[test]
fn yields_follow_the_expected_ordering() {
    let ys: Vec<f64> = ["eq8_3qubit", "golden_3qubit_cws", "h_5qubit_cws", "steane_7qubit"]
        .iter()
        .map(|c| yield_at(c, "0.200000"))
        .collect();
    assert!(ys.iter().all(|y| *y > 0.0 && *y < 1.0), "{ys:?}");
    assert!(ys.windows(2).all(|w| w[0] > w[1]), "{ys:?}");
}

#[test]
fn yield_grid_behaviour() {
    let (code, out, _) = run(&["yield", "golden_3qubit_cws", "--p-grid", "0.05:0.30:0.05"]);
    assert_eq!(code, 0);
    let rows: Vec<Vec<&str>> = out.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    let ys: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(ys.windows(2).all(|w| w[1] <= w[0]), "{ys:?}");
    assert_eq!(rows[5][3], "above_threshold");

    let (_, out, _) = run(&["yield", "golden_3qubit_cws", "--p-grid", "0.1:0.1:0.1", "--target-eps", "1"]);
    assert!(out.lines().any(|l| l == "0.100000,1,0,ok"), "{out}");
}

#[test]
fn verify_exit_codes() {
    let (code, out, _) = run(&["verify-paper", "--only", "1,3"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("2 of 2 claims passed"));
    let (code, out, _) = run(&["verify-paper", "--only", "2", "--tolerance-scale", "0"]);
    assert_eq!(code, 2, "{out}");
    assert!(out.contains("FAIL"));
}

#[test]
fn encode_emits_graph_state_circuits() {
    let dir = tempfile::tempdir().unwrap();
    let edge = write_temp(&dir, "edge.code", "format: cws\nn: 2\ngraph: 01;10\ncodeword: 01\n");
    let (code, out, _) = run(&["encode", &edge]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.starts_with("H ")).count(), 2);
    assert_eq!(out.lines().filter(|l| l.starts_with("CZ ")).count(), 1);

    let tri = write_temp(&dir, "tri.code", "format: cws\nn: 3\ngraph: 011;101;110\ncodeword: 111\n");
    let (_, out, _) = run(&["encode", &tri]);
    assert_eq!(out.lines().filter(|l| l.starts_with("H ")).count(), 3);
    assert_eq!(out.lines().filter(|l| l.starts_with("CZ ")).count(), 3);

    let (code, _, err) = run(&["encode", "eq8_3qubit"]);
    assert_eq!(code, 1);
    assert!(err.contains("no graph form available"), "{err}");
}

#[test]
fn builtins_print_as_loadable_files() {
    let (code, out, _) = run(&["builtin"]);
    assert_eq!(code, 0);
    let dir = tempfile::tempdir().unwrap();
    for name in out.lines() {
        let (_, text, _) = run(&["builtin", name]);
        let path = write_temp(&dir, &format!("{name}.code"), &text);
        assert_eq!(cli::load_code(&path).unwrap().body, msd_core::registry::builtin(name).unwrap().body);
    }
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_msd")).args(["builtin"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("eq8_3qubit"));
    let out = Command::new(env!("CARGO_BIN_EXE_msd")).args(["analyze"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
