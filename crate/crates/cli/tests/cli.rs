//! Runs the `ghostdim` binary end to end.

use std::path::PathBuf;
use std::process::{Command, Output};

fn ghostdim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ghostdim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("ghostdim_cli_{}_{name}", std::process::id()))
}

#[test]
fn sequence_reproduces_cantor_iterates() {
    let out = ghostdim(&["sequence", "--q", "3", "--digits", "0,2", "--k", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "101000101000000000101000101\n");
    let out = ghostdim(&["sequence", "--q", "3", "--digits", "0,2", "--k", "0"]);
    assert_eq!(stdout(&out), "1\n");
}

#[test]
fn oracle_flag_gives_identical_words() {
    for (q, digits, k) in [
        ("3", "0,2", "7"),
        ("4", "0,1,3", "6"),
        ("10", "0,2,5,8", "4"),
        ("7", "0", "5"),
    ] {
        let a = ghostdim(&["sequence", "--q", q, "--digits", digits, "--k", k]);
        let b = ghostdim(&[
            "sequence", "--q", q, "--digits", digits, "--k", k, "--oracle",
        ]);
        assert!(a.status.success() && b.status.success());
        assert_eq!(a.stdout, b.stdout, "q={q} A={digits}");
    }
}

#[test]
fn exit_codes() {
    let bad = ghostdim(&["analyze", "--q", "3", "--digits", "1,2"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("does not contain 0"));
    assert_eq!(
        ghostdim(&["analyze", "--q", "1", "--digits", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ghostdim(&["analyze", "--q", "5", "--digits", "0,5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ghostdim(&["analyze", "--q", "5", "--digits", "0,2,2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(ghostdim(&["analyze", "--q", "5"]).status.code(), Some(2));

    let over = ghostdim(&[
        "sequence", "--q", "3", "--digits", "0,2", "--k", "5", "--budget", "100",
    ]);
    assert_eq!(over.status.code(), Some(3));
    let over = ghostdim(&[
        "fourier", "--q", "10", "--digits", "0,1", "--k", "9", "--routes", "direct",
    ]);
    assert_eq!(over.status.code(), Some(3));
    // the product route never materializes the sequence
    let fine = ghostdim(&[
        "fourier",
        "--q",
        "10",
        "--digits",
        "0,1",
        "--k",
        "30",
        "--routes",
        "product",
        "--no-meta",
    ]);
    assert!(fine.status.success());
}

#[test]
fn analyze_reports_both_dimension_routes() {
    let out = ghostdim(&["analyze", "--q", "3", "--digits", "0,2", "--no-meta"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("field,value\n"));
    assert!(text.contains("substitution_1,101\n"));
    assert!(text.contains("mahler_eigenvalue,2\n"));
    assert!(text.contains("mahler_equation,M(z) - (1 + z^2)M(z^3) = 0\n"));
    assert!(text.contains("dimension_log_q_m,6.3092975357145742e-1\n"));
    assert!(text.contains("dimension_log_q_eigenvalue,6.3092975357145742e-1\n"));
    assert!(text.contains("routes_agree,true\n"));

    let out = ghostdim(&[
        "analyze",
        "--q",
        "2",
        "--digits",
        "0,1",
        "--format",
        "json",
        "--no-meta",
    ]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["report"]["dimension_log_q_m"], 1.0);
    assert_eq!(doc["report"]["mahler_eigenvalue"], "2");
    assert!(doc.get("meta").is_none());
}

#[test]
fn fourier_table_layout() {
    let out = ghostdim(&[
        "fourier",
        "--q",
        "3",
        "--digits",
        "0,2",
        "--k",
        "8",
        "--n-min",
        "-50",
        "--n-max",
        "50",
        "--L",
        "45",
        "--no-meta",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,route,k_or_L,re,im"));
    let rows: Vec<Vec<String>> = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    assert_eq!(rows.len(), 101 * 4);
    let zero: Vec<&Vec<String>> = rows.iter().filter(|r| r[0] == "0").collect();
    assert_eq!(zero.len(), 4);
    for r in zero {
        assert_eq!(r[3], "1.0000000000000000e0");
        assert_eq!(r[4].parse::<f64>().unwrap(), 0.0);
    }
    let stderr = String::from_utf8_lossy(&out.stderr).to_string();
    let direct_line = stderr
        .lines()
        .find(|l| l.starts_with("max |direct"))
        .unwrap();
    let value: f64 = direct_line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(value <= 1e-9, "{stderr}");
}

#[test]
fn fourier_json_has_summary() {
    let out = ghostdim(&[
        "fourier",
        "--q",
        "4",
        "--digits",
        "0,1,2,3",
        "--k",
        "3",
        "--n-min",
        "1",
        "--n-max",
        "5",
        "--routes",
        "product,limit",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["meta"]["command"], "fourier");
    assert!(doc["meta"]["generated_at"].is_u64());
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    for row in rows.iter().filter(|r| r["route"] == "limit") {
        let (re, im) = (row["re"].as_f64().unwrap(), row["im"].as_f64().unwrap());
        assert!(re.hypot(im) < 1e-10);
    }
    assert!(doc["summary"]["max_abs_limit_minus_product"].is_f64());
    assert!(
        ghostdim(&["fourier", "--q", "3", "--digits", "0,2", "--routes", "fft"])
            .status
            .code()
            == Some(2)
    );
}

#[test]
fn staircase_csv_and_svg() {
    let svg = temp_path("stairs.svg");
    let csv = temp_path("stairs.csv");
    let out = ghostdim(&[
        "staircase",
        "--q",
        "3",
        "--digits",
        "0,2",
        "--k",
        "6",
        "--grid",
        "729",
        "--no-meta",
        "--svg",
        svg.to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,F"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (x, f) = l.split_once(',').unwrap();
            (x.parse().unwrap(), f.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 729);
    assert_eq!(rows[0], (0.0, 0.0));
    assert_eq!(rows[364], (0.5, 0.5));
    assert_eq!(rows[728], (1.0, 1.0));
    assert!(rows.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1));
    let picture = std::fs::read_to_string(&svg).unwrap();
    assert!(picture.contains("<polyline"));
    let _ = std::fs::remove_file(svg);
    let _ = std::fs::remove_file(csv);
}

#[test]
fn probe_csv_header() {
    let out = ghostdim(&[
        "probe",
        "--q",
        "3",
        "--digits",
        "0,2",
        "--t-min",
        "10",
        "--t-max",
        "11",
        "--no-meta",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("t,z,J,G\n"));
    assert_eq!(text.lines().count(), 22);
}

#[test]
fn outputs_are_deterministic_without_meta() {
    let args = [
        "fourier",
        "--q",
        "10",
        "--digits",
        "0,2,5,8",
        "--k",
        "5",
        "--n-min",
        "-200",
        "--n-max",
        "200",
        "--no-meta",
    ];
    assert_eq!(ghostdim(&args).stdout, ghostdim(&args).stdout);
    let with_meta = ghostdim(&["staircase", "--q", "3", "--digits", "0,2", "--grid", "5"]);
    let text = stdout(&with_meta);
    assert!(text.starts_with("# command=\"staircase\"\n"));
    assert!(text.contains("# generated_at="));
    assert!(text.contains("\nx,F\n"));
}

#[test]
fn verify_suites_pass() {
    let out = ghostdim(&["verify", "--suite", "dimension"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert_eq!(
        stdout(&out)
            .lines()
            .filter(|l| l.starts_with("PASS"))
            .count(),
        7
    );

    let out = ghostdim(&["verify", "--suite", "oracle", "--k-max", "6"]);
    assert!(out.status.success(), "{}", stdout(&out));

    let out = ghostdim(&[
        "verify", "--suite", "fourier", "--k-max", "4", "--n-max", "60",
    ]);
    assert!(out.status.success(), "{}", stdout(&out));

    let out = ghostdim(&["verify", "--suite", "cdf", "--k-max", "4"]);
    assert!(out.status.success(), "{}", stdout(&out));

    let out = ghostdim(&["verify", "--suite", "asymptotic"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(!stdout(&out).contains("FAIL"));
}

#[test]
fn verify_budget_error_exit_code() {
    // even the level-0 prefix (one symbol) exceeds a zero budget
    let out = ghostdim(&["verify", "--suite", "oracle", "--budget", "0"]);
    assert_eq!(out.status.code(), Some(3));
}
