use std::fs;
use std::path::Path;
use std::process::Command;

use proptest::prelude::*;
use subnormal_cli::commands::{cmd_golden, cmd_scan, parse_params, witness_report};
use subnormal_cli::golden::{self, GoldenFile, BUNDLED};
use subnormal_cli::records::{from_csv, to_csv};
use subnormal_cli::scan::{run_scan, scan_document};
use subnormal_cli::{CliError, Grid, OutputFormat, RunConfig, ScanDocument, WitnessSummary};
use subnormal_core::NumericMode;

fn config(grid: &str, mode: NumericMode) -> RunConfig {
    let mut c = RunConfig::new(mode);
    c.grid = Grid::parse(grid, mode).unwrap();
    c
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subnormal"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = binary().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn json_and_csv_round_trip(
        x0 in 1u32..40, y0 in 1u32..40, dx in 1u32..20, dy in 1u32..20, real in any::<bool>(),
    ) {
        let mode = if real { NumericMode::Real } else { NumericMode::Rational };
        let grid = format!(
            "{}:{}:{},{}:{}:{}",
            x0 as f64 / 8.0, (x0 + 3 * dx) as f64 / 8.0, dx as f64 / 8.0,
            y0 as f64 / 7.0, (y0 + 2 * dy) as f64 / 7.0, dy as f64 / 7.0,
        );
        let c = config(&grid, mode);
        let records = run_scan(&c).unwrap();
        prop_assert!(!records.is_empty());
        let doc = scan_document(&c, records.clone());
        let parsed = ScanDocument::from_json(&doc.to_json().unwrap()).unwrap();
        prop_assert_eq!(&parsed, &doc);
        let rows = from_csv(&to_csv(&records).unwrap()).unwrap();
        let expected: Vec<_> = records.iter().map(|r| r.csv_row()).collect();
        prop_assert_eq!(rows, expected);
    }
}

#[test]
fn witnesses_round_trip_through_json() {
    let mut c = config("3:15:3,3:12:3", NumericMode::Rational);
    c.witnesses = true;
    c.m_cap = 80;
    c.n_cap = 5;
    let doc = scan_document(&c, run_scan(&c).unwrap());
    assert!(doc.records.iter().any(|r| matches!(r.witness, Some(WitnessSummary::NegativeDifference { .. }))));
    assert!(doc.records.iter().any(|r| matches!(r.witness, Some(WitnessSummary::NegativeDensity { .. }))));
    assert_eq!(ScanDocument::from_json(&doc.to_json().unwrap()).unwrap(), doc);
}

#[test]
fn output_independent_of_worker_count() {
    let mut outputs = Vec::new();
    for jobs in [1, 3, 8] {
        let mut c = config("0.5:12:0.5,0.25:9:0.75", NumericMode::Rational);
        c.jobs = Some(jobs);
        outputs.push(cmd_scan(&c, None, None).unwrap());
        c.format = OutputFormat::Csv;
        outputs.push(cmd_scan(&c, None, None).unwrap());
    }
    assert_eq!(outputs[0], outputs[2]);
    assert_eq!(outputs[0], outputs[4]);
    assert_eq!(outputs[1], outputs[3]);
    assert_eq!(outputs[1], outputs[5]);
}

#[test]
fn scan_writes_files_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let svg = dir.path().join("scan.svg");
    let mut c = config("1:3:1", NumericMode::Rational);
    c.format = OutputFormat::Csv;
    assert_eq!(cmd_scan(&c, Some(&out), Some(&svg)).unwrap(), "");
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 10);
    let map = fs::read_to_string(&svg).unwrap();
    assert!(map.starts_with("<svg") && map.contains("data-curve=\"s=p\""));
    let names: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 2);
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing").join("scan.json");
    let err = cmd_scan(&config("1:2:1", NumericMode::Rational), Some(&out), None).unwrap_err();
    assert!(matches!(err, CliError::Io { .. }));
    assert_eq!(err.exit_code(), 1);
    assert!(!out.with_file_name("scan.json.partial").exists());
}

#[test]
fn bundled_golden_passes() {
    let summary = cmd_golden(None, false, None).unwrap();
    assert!(summary.ends_with("6/6 pass\n"), "{summary}");
}

#[test]
fn bootstrap_reproduces_the_stored_file() {
    assert_eq!(golden::bootstrap().unwrap().to_json().unwrap(), BUNDLED);
    let stored = Path::new(env!("CARGO_MANIFEST_DIR")).join("golden/reference_cases.json");
    assert_eq!(fs::read_to_string(stored).unwrap(), BUNDLED);
}

#[test]
fn tampered_golden_fails_naming_the_case() {
    let mut file = GoldenFile::bundled().unwrap();
    let case = file.cases.iter_mut().find(|c| c.s1 == "8" && c.s2 == "12").unwrap();
    case.alpha1.re += 1e-6;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tampered.json");
    fs::write(&path, file.to_json().unwrap()).unwrap();
    let err = cmd_golden(Some(&path), false, None).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    let msg = err.to_string();
    assert!(msg.contains("FAIL (8, 12) (alpha1)"), "{msg}");
    assert!(msg.contains("5/6 pass"), "{msg}");

    let (code, _, stderr) = run(&["golden", "--file", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("(8, 12)"), "{stderr}");
}

#[test]
fn tampered_witness_fails() {
    let mut file = GoldenFile::bundled().unwrap();
    let case = file.cases.iter_mut().find(|c| c.s1 == "6").unwrap();
    case.witness.as_mut().unwrap().m = 74;
    let outcomes = golden::check(&file).unwrap();
    let bad: Vec<_> = outcomes.iter().filter(|o| !o.passed()).collect();
    assert_eq!(bad.len(), 1);
    assert_eq!((bad[0].label.as_str(), bad[0].failures.as_slice()), ("(6, 6)", ["witness"].as_slice()));
}

#[test]
fn missing_golden_points_to_bootstrap() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("absent.json");
    let (code, _, stderr) = run(&["golden", "--file", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stderr.contains("golden --bootstrap --out"), "{stderr}");
    let out = dir.path().join("fresh.json");
    let (code, _, _) = run(&["golden", "--bootstrap", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(fs::read_to_string(&out).unwrap(), BUNDLED);
}

#[test]
fn classify_reports() {
    let (code, stdout, _) = run(&["classify", "15", "10"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["subnormal"], false);
    assert_eq!(v["gamma"], "-75");
    assert_eq!(v["disc"], "2025");
    assert_eq!(v["roots"]["alpha1"]["exact"], "2/5");
    assert_eq!(v["roots"]["alpha2"]["exact"], "1/10");

    let (_, stdout, _) = run(&["classify", "2", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!((v["subnormal"].as_bool(), v["boundary_flag"].as_bool()), (Some(true), Some(true)));
    assert_eq!(v["rule_fired"], "disc<0:s>=p");

    let (_, stdout, _) = run(&["classify", "1", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["subnormal"], true);
    assert_eq!((v["roots"]["alpha1"]["re"].as_f64(), v["roots"]["alpha2"]["re"].as_f64()), (Some(-2.0), Some(-3.0)));

    let (_, stdout, _) = run(&["classify", "1.5", "25"]);
    assert!(stdout.contains("\"s1\": \"3/2\""), "{stdout}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["classify", "0", "1"]).0, 1);
    let (code, _, stderr) = run(&["classify", "1", "abc"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("`s2`"), "{stderr}");
    assert_eq!(run(&["scan", "--grid", "1:2:0"]).0, 1);
    assert_eq!(run(&["witness", "1", "1", "--m-cap", "0"]).0, 1);
    assert_eq!(run(&["no-such-command"]).0, 1);
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(run(&["density", "15", "10"]).0, 1);
    assert_eq!(run(&["density", "1", "1", "--verify", "2", "--tol", "1e-30"]).0, 3);
    assert_eq!(run(&["classify", "6", "6", "--mode", "real"]).0, 0);
}

#[test]
fn witness_command() {
    let (code, stdout, _) = run(&["witness", "15", "10"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!((v["difference"]["m"].as_u64(), v["difference"]["n"].as_u64()), (Some(75), Some(0)));

    let r = witness_report(&parse_params("8", "12", NumericMode::Rational).unwrap(), 120, 120).unwrap();
    assert!(matches!(r.difference, Some(WitnessSummary::NegativeDifference { m, .. }) if m <= 73));
    assert_eq!(r.density, None);
    let r = witness_report(&parse_params("3", "3", NumericMode::Rational).unwrap(), 120, 120).unwrap();
    assert_eq!(r.difference, None);
    assert!(matches!(r.density, Some(WitnessSummary::NegativeDensity { value, .. }) if value < 0.0));

    let (_, stdout, _) = run(&["witness", "1", "1"]);
    assert!(stdout.contains("\"status\": \"none within caps\""), "{stdout}");
}

#[test]
fn density_csv() {
    let (code, stdout, _) = run(&["density", "1", "1", "--per-decade", "2", "--verify", "5"]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("t,w(t)"));
    let last = lines.last().unwrap();
    let (t, w) = last.split_once(',').unwrap();
    assert_eq!((t.parse::<f64>().unwrap(), w.parse::<f64>().unwrap()), (1.0, 0.0));
}

#[test]
fn svg_format_on_stdout() {
    let (code, stdout, _) = run(&["scan", "--grid", "0.5:10:0.5", "--format", "svg"]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("<svg") && stdout.trim_end().ends_with("</svg>"));
    // (1, 1), (2, 2) and (6, 6) lie in the window
    assert_eq!(stdout.matches("<circle").count(), 3);
}
