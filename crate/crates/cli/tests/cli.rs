use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_photon-cycle"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Header and numeric rows; empty cells become NaN.
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap_or(f64::NAN)).collect())
        .collect();
    (header, rows)
}

fn column(rows: &[Vec<f64>], i: usize) -> Vec<f64> {
    rows.iter().map(|r| r[i]).collect()
}

#[test]
fn pnd_column_sums_to_one() {
    let (header, rows) = parse_csv(&stdout_ok(&["pnd", "--family", "thermal", "--order", "sa", "--nbar", "0.25", "--p", "2", "--q", "2"]));
    assert_eq!(header, ["n", "probability"]);
    let total: f64 = column(&rows, 1).iter().sum();
    assert!((total - 1.0).abs() < 1e-10);
    assert_eq!(column(&rows, 0), (0..rows.len()).map(|n| n as f64).collect::<Vec<_>>());
}

#[test]
fn cat_pnd_has_zero_rows_at_odd_parity() {
    let (_, rows) = parse_csv(&stdout_ok(&["pnd", "--family", "ecs", "--alpha", "2", "--order", "as", "--p", "4", "--q", "8"]));
    let (p, q) = (4, 8);
    for row in &rows {
        let n = row[0] as usize;
        if (n + q - p) % 2 == 1 {
            assert_eq!(row[1], 0.0, "n = {n}");
        }
    }
    assert!(rows.iter().any(|r| r[1] > 0.0));
}

#[test]
fn identity_pnd_is_geometric() {
    let (_, rows) = parse_csv(&stdout_ok(&["pnd", "--nbar", "0.25", "--p", "0", "--q", "0"]));
    for w in rows.windows(2).take(30) {
        assert!((w[1][1] / w[0][1] - 0.2).abs() < 1e-12);
    }
}

#[test]
fn thermal_wigner_has_a_central_dip() {
    let nbar = 0.04;
    let (header, rows) = parse_csv(&stdout_ok(&["wigner", "--nbar", "0.04", "--p", "1", "--q", "1"]));
    assert_eq!(header, ["re", "im", "w"]);
    assert_eq!(rows.len(), 81 * 81);
    let w = column(&rows, 2);
    assert!(w.iter().all(|&v| v >= -1e-10));
    let center = rows.iter().find(|r| r[0] == 0.0 && r[1] == 0.0).unwrap()[2];
    assert!(center < 2.0 / (PI * (1.0 + 2.0 * nbar)));
}

#[test]
fn wigner_grid_is_row_major() {
    let (_, rows) = parse_csv(&stdout_ok(&["wigner", "--grid-min", "-1", "--grid-max", "1", "--grid-points", "3"]));
    let coords: Vec<(f64, f64)> = rows.iter().map(|r| (r[0], r[1])).collect();
    assert_eq!(coords[..4], [(-1.0, -1.0), (0.0, -1.0), (1.0, -1.0), (-1.0, 0.0)]);
}

#[test]
fn cat_wigner_goes_negative() {
    let (_, rows) = parse_csv(&stdout_ok(&["wigner", "--family", "ecs", "--alpha", "1", "--p", "1", "--q", "1"]));
    assert!(column(&rows, 2).iter().any(|&w| w < 0.0));
    let (_, rows) = parse_csv(&stdout_ok(&["wigner", "--family", "ecs", "--alpha", "0.1", "--p", "1", "--q", "0"]));
    let min = column(&rows, 2).into_iter().fold(f64::INFINITY, f64::min);
    assert!(min < 0.0, "minimum {min}");
}

#[test]
fn thermal_sweep_increases() {
    let (header, rows) = parse_csv(&stdout_ok(&[
        "q-sweep", "--order", "sa", "--p", "4", "--q", "2", "--sweep-min", "0.01", "--sweep-max", "1", "--sweep-points", "50",
    ]));
    assert_eq!(header, ["x", "q", "q_closed"]);
    assert_eq!(rows.len(), 50);
    let q = column(&rows, 1);
    assert!(q.windows(2).all(|w| w[1] > w[0]));
    for r in &rows {
        assert!((r[1] - r[2]).abs() < 1e-9);
    }
}

#[test]
fn singular_sweep_omits_the_closed_column() {
    let (header, rows) = parse_csv(&stdout_ok(&["q-sweep", "--order", "sa", "--p", "1", "--q", "1", "--sweep-points", "4"]));
    assert_eq!(header, ["x", "q"]);
    assert_eq!(rows.len(), 4);
}

#[test]
fn added_photons_on_weak_thermal_approach_fock() {
    let (_, rows) = parse_csv(&stdout_ok(&[
        "q-sweep", "--p", "3", "--q", "0", "--sweep-min", "1e-6", "--sweep-max", "1e-3", "--sweep-points", "3",
    ]));
    assert!((rows[0][1] + 1.0).abs() < 1e-4);
}

#[test]
fn more_added_photons_lower_q() {
    let at_half = |p: &str| {
        let (_, rows) = parse_csv(&stdout_ok(&[
            "q-sweep", "--p", p, "--q", "2", "--sweep-min", "0.5", "--sweep-max", "0.6", "--sweep-points", "2",
        ]));
        rows[0][1]
    };
    assert!(at_half("6") < at_half("4"));
}

#[test]
fn json_format_carries_columns() {
    let text = stdout_ok(&["pnd", "--p", "1", "--q", "0", "--format", "json"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["columns"][1], "probability");
    let total: f64 = v["rows"].as_array().unwrap().iter().map(|r| r[1].as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-10);
}

fn read_manifest(dir: &Path) -> serde_json::Map<String, Value> {
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    v.as_object().unwrap().clone()
}

#[test]
fn figure_one_writes_six_normalized_files_and_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    stdout_ok(&["figure", "1", "--out", dir.path().to_str().unwrap()]);
    let manifest = read_manifest(dir.path());
    assert!(manifest.values().all(|v| !v.is_object() && !v.is_array()));
    assert_eq!(manifest["figure"], 1);
    assert!(manifest.contains_key("library_version"));
    for (label, (p, q, order)) in ('a'..='f').zip([(2, 2, "sa"), (4, 2, "sa"), (8, 6, "sa"), (2, 2, "as"), (4, 2, "as"), (8, 6, "as")]) {
        let name = format!("fig1_{label}");
        let (_, rows) = parse_csv(&fs::read_to_string(dir.path().join(format!("{name}.csv"))).unwrap());
        assert!((column(&rows, 1).iter().sum::<f64>() - 1.0).abs() < 1e-10);
        assert_eq!(manifest[&format!("{name}.family")], "thermal");
        assert_eq!(manifest[&format!("{name}.nbar")], 0.25);
        assert_eq!(manifest[&format!("{name}.p")], p);
        assert_eq!(manifest[&format!("{name}.q")], q);
        assert_eq!(manifest[&format!("{name}.order")], order);
        assert_eq!(manifest[&format!("{name}.cutoff")].as_u64().unwrap() as usize, rows.len() - 1);
    }
}

#[test]
fn figure_three_stays_in_range() {
    let dir = tempfile::tempdir().unwrap();
    stdout_ok(&["figure", "3", "--out", dir.path().to_str().unwrap()]);
    for label in 'a'..='d' {
        let text = fs::read_to_string(dir.path().join(format!("fig3_{label}.csv"))).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "curve,x,q,q_closed");
        let mut rows = 0;
        for line in lines {
            let q: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
            assert!(q > -1.0 && q < 0.5, "fig3_{label}: {line}");
            rows += 1;
        }
        assert_eq!(rows, 150);
    }
}

#[test]
fn figure_five_first_panels_of_each_order_coincide() {
    let dir = tempfile::tempdir().unwrap();
    stdout_ok(&["figure", "5", "--out", dir.path().to_str().unwrap()]);
    let load = |label: char| {
        let (_, rows) = parse_csv(&fs::read_to_string(dir.path().join(format!("fig5_{label}.csv"))).unwrap());
        column(&rows, 2)
    };
    let (a, d) = (load('a'), load('d'));
    assert_eq!(a.len(), 81 * 81);
    let worst = a.iter().zip(&d).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-6, "max |W_a - W_d| = {worst}");
}

#[test]
fn outputs_are_byte_identical_across_runs_and_thread_counts() {
    let args = ["wigner", "--family", "ecs", "--alpha-re", "0.7", "--alpha-im", "-0.4", "--order", "as", "--p", "2", "--q", "1", "--grid-points", "31"];
    let one = bin().args(args).env("RAYON_NUM_THREADS", "1").output().unwrap();
    let four = bin().args(args).env("RAYON_NUM_THREADS", "4").output().unwrap();
    let again = bin().args(args).output().unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, again.stdout);

    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    for (dir, threads) in [(&d1, "1"), (&d2, "3")] {
        let out = bin()
            .args(["figure", "7", "--sweep-points", "6", "--out", dir.path().to_str().unwrap()])
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    for file in ["fig7_a.csv", "fig7_b.csv", "fig7_c.csv", "fig7_d.csv", "manifest.json"] {
        assert_eq!(fs::read(d1.path().join(file)).unwrap(), fs::read(d2.path().join(file)).unwrap(), "{file}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["figure", "0"]).status.code(), Some(2));
    assert_eq!(run(&["figure", "8"]).status.code(), Some(2));
    assert_eq!(run(&["pnd", "--nbar", "-0.5"]).status.code(), Some(2));
    assert_eq!(run(&["pnd", "--order", "sideways"]).status.code(), Some(2));
    assert_eq!(run(&["q-sweep", "--sweep-points", "1"]).status.code(), Some(2));
    assert_eq!(run(&["pnd", "--tail-tol", "0"]).status.code(), Some(2));
    // the vacuum has nothing to subtract
    assert_eq!(run(&["pnd", "--nbar", "0", "--order", "as", "--p", "1", "--q", "1"]).status.code(), Some(3));
    assert_eq!(run(&["pnd", "--family", "ecs", "--alpha", "0", "--order", "as", "--p", "0", "--q", "2"]).status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing").join("out.csv");
    assert_eq!(run(&["pnd", "--out", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn validate_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["validate", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let records = report["records"].as_array().unwrap();
    assert_eq!(report["counts"]["fail"], 0);
    let of = |quantity: &str, family: &str| -> Vec<&Value> {
        records
            .iter()
            .filter(|r| r["quantity"] == quantity && r["params"]["family"] == family)
            .collect()
    };
    for quantity in ["pnd", "wigner", "norm"] {
        let recs = of(quantity, "thermal");
        assert_eq!(recs.len(), 162);
        assert!(recs.iter().all(|r| r["status"] == "pass"), "{quantity}");
    }
    let q = of("mandel_q", "thermal");
    assert_eq!(q.len(), 162);
    assert!(q.iter().all(|r| r["status"] == "pass" || r["status"] == "singular-branch"));
    assert!(q.iter().any(|r| r["status"] == "singular-branch"));
    let signs = of("norm_sign", "ecs");
    assert!(signs.iter().any(|r| r["status"] == "flagged-paper-discrepancy"));
    for r in signs {
        let odd = (r["params"]["p"].as_u64().unwrap() + r["params"]["q"].as_u64().unwrap()) % 2 == 1;
        assert_eq!(r["status"] == "flagged-paper-discrepancy", odd);
    }
    // each tuple at most once per quantity
    let mut keys: Vec<String> = records.iter().map(|r| format!("{}{}", r["quantity"], r["params"])).collect();
    let total = keys.len();
    keys.sort();
    keys.dedup();
    assert_eq!(keys.len(), total);
}

#[test]
fn validate_into_unwritable_location_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("no").join("such").join("report.json");
    assert_eq!(run(&["validate", "--out", path.to_str().unwrap()]).status.code(), Some(2));
}
