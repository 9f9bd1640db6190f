use std::process::{Command, Output};

use serde_json::Value;
use spinpoly::coeffs::{CfzExpansion, ResolventExpansion};
use spinpoly::SpinLabel;
use spinpoly_cli::output::{parse_float, OutputRecord};

fn spinpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinpoly"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> OutputRecord {
    let out = spinpoly(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    OutputRecord::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
}

fn column(record: &OutputRecord, name: &str) -> Vec<f64> {
    record.rows.iter().map(|r| parse_float(&r[name]).unwrap()).collect()
}

#[test]
fn spin_half_cayley_example() {
    let r = json(&["coeffs", "--spin", "1/2", "--form", "cayley", "--alpha", "1.0"]);
    assert_eq!(r.schema_version, "1");
    assert_eq!(r.command, "coeffs");
    assert_eq!(column(&r, "resolvent"), vec![0.5, 0.5]);
    assert_eq!(column(&r, "cayley"), vec![0.0, 1.0]);
}

#[test]
fn spin_half_exponential_at_zero() {
    let r = json(&["coeffs", "--spin", "0.5", "--form", "cfz", "--theta", "0"]);
    assert_eq!(column(&r, "cfz"), vec![1.0, 0.0]);
}

#[test]
fn spin_one_cayley_example() {
    let r = json(&["coeffs", "--spin", "1", "--form", "cayley", "--alpha", "0.5"]);
    assert_eq!(column(&r, "resolvent"), vec![1.0, 0.25, 0.125]);
    let same = json(&["coeffs", "--two-j", "2", "--form", "cayley", "--alpha", "0.5"]);
    assert_eq!(r.rows, same.rows);
}

#[test]
fn json_round_trip_reproduces_library_values() {
    for (spin, theta, alpha) in [("7/2", -2.3f64, 0.37f64), ("6", 11.0, -4.25), ("25/2", 0.1, 1e-3)] {
        let r = json(&["coeffs", "--spin", spin, "--form", "cfz", "--theta", &theta.to_string()]);
        let two_j = r.inputs["two_j"].as_u64().unwrap() as u32;
        let theta_back = parse_float(&r.inputs["theta"]).unwrap();
        assert_eq!(theta_back.to_bits(), theta.to_bits());
        let want = CfzExpansion::new(SpinLabel::from_two_j(two_j)).coefficients(theta_back).values;
        let got = column(&r, "cfz");
        assert!(got.iter().zip(&want).all(|(a, b)| a.to_bits() == b.to_bits()));

        let r = json(&["coeffs", "--spin", spin, "--form", "cayley", "--alpha", &alpha.to_string()]);
        let alpha_back = parse_float(&r.inputs["alpha"]).unwrap();
        let want = ResolventExpansion::new(SpinLabel::from_two_j(two_j)).coefficients(alpha_back);
        let got_b = column(&r, "resolvent");
        let got_c = column(&r, "cayley");
        assert!(got_b.iter().zip(&want.resolvent_values).all(|(a, b)| a.to_bits() == b.to_bits()));
        assert!(got_c.iter().zip(&want.cayley_values).all(|(a, b)| a.to_bits() == b.to_bits()));
    }
}

fn csv_rows(args: &[&str]) -> (Vec<String>, Vec<Vec<String>>) {
    let mut full = args.to_vec();
    full.extend(["--format", "csv"]);
    let out = spinpoly(&full);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn csv_and_json_carry_identical_numbers() {
    for args in [
        &["coeffs", "--two-j", "9", "--form", "cfz", "--theta", "2.2"][..],
        &["coeffs", "--two-j", "9", "--form", "cayley", "--alpha", "-0.3"][..],
        &["verify", "--max-two-j", "2", "--axes", "2"][..],
    ] {
        let record = json(args);
        let (header, rows) = csv_rows(args);
        assert_eq!(rows.len(), record.rows.len());
        for (row, csv_row) in record.rows.iter().zip(&rows) {
            let mut flat = Vec::new();
            for (k, v) in row {
                match v {
                    Value::Object(inner) => {
                        flat.extend(inner.iter().map(|(ik, iv)| (format!("{k}.{ik}"), iv.clone())))
                    }
                    other => flat.push((k.clone(), other.clone())),
                }
            }
            for (name, v) in flat {
                let col = header.iter().position(|h| *h == name).unwrap();
                let cell = &csv_row[col];
                match v {
                    Value::Number(n) => assert_eq!(cell.parse::<f64>().unwrap().to_bits(), n.as_f64().unwrap().to_bits()),
                    Value::Bool(b) => assert_eq!(cell, &b.to_string()),
                    Value::String(s) => assert_eq!(cell, &s),
                    other => panic!("unexpected cell {other:?}"),
                }
            }
        }
    }
}

#[test]
fn csv_floats_have_seventeen_significant_digits() {
    let (_, rows) = csv_rows(&["coeffs", "--two-j", "3", "--form", "cfz", "--theta", "1"]);
    for row in rows {
        let mantissa = row[1].split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17, "{}", row[1]);
    }
}

#[test]
fn table_examples_are_exact_strings() {
    let r = json(&["table", "--max-j", "2"]);
    let rows: Vec<(u64, String)> = r
        .rows
        .iter()
        .map(|row| (row["j"].as_u64().unwrap(), row["magnitude"].as_str().unwrap().to_string()))
        .collect();
    let want = [(0, "1"), (1, "1"), (1, "1"), (2, "1"), (2, "5"), (2, "4")];
    assert_eq!(rows, want.map(|(j, m)| (j, m.to_string())));
    assert_eq!(json(&["table", "--max-j", "0"]).rows.len(), 1);

    // j = 40 has coefficients far beyond 2^53; strings keep every digit.
    let r = json(&["table", "--max-j", "40"]);
    let last = r.rows.last().unwrap()["det_coefficient"].as_str().unwrap();
    assert!(last.len() > 16 && last.bytes().all(|b| b.is_ascii_digit()));
}

#[test]
fn verify_small_spins_pass_tightly() {
    let r = json(&["verify", "--max-two-j", "1"]);
    assert!(!r.rows.is_empty());
    for row in &r.rows {
        assert_eq!(row["passed"], Value::Bool(true));
        assert!(parse_float(&row["residual"]).unwrap() < 1e-12, "{row:?}");
    }
    assert_eq!(spinpoly(&["verify", "--max-two-j", "0"]).status.code(), Some(0));
}

#[test]
fn verify_failures_exit_one() {
    let out = spinpoly(&["verify", "--max-two-j", "4", "--axes", "2", "--rel-matrix-tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    // The full report is still written.
    let r = OutputRecord::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert!(r.rows.iter().any(|row| row["passed"] == Value::Bool(false)));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["table", "--max-j", "-1"][..],
        &["bench", "--two-j", ""][..],
        &["bench"][..],
        &["coeffs", "--spin", "1/3", "--form", "cfz", "--theta", "1"][..],
        &["coeffs", "--spin", "0.25", "--form", "cfz", "--theta", "1"][..],
        &["coeffs", "--spin", "1", "--two-j", "2", "--form", "cfz", "--theta", "1"][..],
        &["coeffs", "--spin", "1", "--form", "cfz"][..],
        &["coeffs", "--spin", "1", "--form", "cfz", "--alpha", "1"][..],
        &["coeffs", "--spin", "1", "--form", "cayley", "--alpha", "inf"][..],
        &["coeffs", "--spin", "1", "--form", "rodrigues", "--theta", "1"][..],
        &["coeffs", "--two-j", "100000", "--form", "cfz", "--theta", "1"][..],
        &["verify", "--max-two-j", "-3"][..],
        &["verify", "--axes", "0"][..],
        &["verify", "--max-two-j", "1", "--quad-tol", "0"][..],
        &["bench", "--two-j", "2", "--axis", "0,0,0"][..],
        &["--format", "xml", "table", "--max-j", "1"][..],
        &["frobnicate"][..],
        &[][..],
    ] {
        let out = spinpoly(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    assert_eq!(spinpoly(&["--help"]).status.code(), Some(0));
}

#[test]
fn bench_cross_checks_agree() {
    let r = json(&["bench", "--two-j", "1,6", "--reps", "2"]);
    let methods: Vec<&str> = r.rows.iter().map(|row| row["method"].as_str().unwrap()).collect();
    assert_eq!(
        &methods[..4],
        ["cayley_polynomial", "lu_inverse", "cfz_polynomial", "eigen_exponential"]
    );
    assert_eq!(r.rows.len(), 8);
    for row in &r.rows {
        assert!(parse_float(&row["residual"]).unwrap() < 1e-10);
        assert!(parse_float(&row["median_seconds"]).unwrap() >= 0.0);
        assert_eq!(row["passed"], Value::Bool(true));
    }
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let out = spinpoly(&["table", "--max-j", "3", "--format", "csv", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("j,m,magnitude,det_coefficient\n"));
    assert_eq!(text.lines().count(), 1 + 1 + 2 + 3 + 4);

    let missing = dir.path().join("no/such/dir/out.json");
    let out = spinpoly(&["table", "--max-j", "1", "--output", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
