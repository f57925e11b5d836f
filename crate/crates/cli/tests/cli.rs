use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
}

fn qkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qkit"))
        .args(args)
        .output()
        .expect("qkit runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn exit_codes() {
    assert_eq!(qkit(&["--help"]).status.code(), Some(0));
    assert_eq!(qkit(&["--version"]).status.code(), Some(0));
    let unknown = qkit(&["qft-bench", "--bogus"]);
    assert_eq!(unknown.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("Usage"));
    assert_eq!(qkit(&[]).status.code(), Some(1));
    let missing = qkit(&["mitigate", "twirl", "--in", "/nonexistent/circuit.txt"]);
    assert_eq!(missing.status.code(), Some(1));

    let gcd = qkit(&["order-find", "--modulus", "35", "--base", "14"]);
    assert_eq!(gcd.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&gcd.stderr).contains("= 7"));
    let big = qkit(&[
        "order-find",
        "--modulus",
        "35",
        "--base",
        "2",
        "--arg-qubits",
        "19",
    ]);
    assert_eq!(big.status.code(), Some(2));
}

#[test]
fn malformed_circuit_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "qubits 2\nh 0\nfrobnicate 1\n").unwrap();
    let out = qkit(&["mitigate", "twirl", "--in", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn qft_bench_sweep() {
    let text = stdout(&qkit(&["qft-bench"]));
    assert!(text.starts_with("# manifest_digest "));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 26);
    for row in rows.iter().filter(|r| r[1] == "full") {
        let n: usize = row[0].parse().unwrap();
        let h: usize = row[2].parse().unwrap();
        let rot: usize = row[3].parse().unwrap();
        assert_eq!(h + rot, n * (n + 1) / 2);
        assert_eq!(row[6].is_empty(), n > 12);
    }

    let empty = stdout(&qkit(&["qft-bench", "--n-min", "5", "--n-max", "4"]));
    assert!(csv_rows(&empty).is_empty());
    assert_eq!(
        empty.lines().nth(1),
        Some("n,m,hadamards,rotations,swaps,recursive_calls,fidelity")
    );
}

#[test]
fn qft_bench_regression_row() {
    let text = stdout(&qkit(&[
        "qft-bench",
        "--n-min",
        "8",
        "--n-max",
        "8",
        "--cutoffs",
        "3",
        "--trials",
        "64",
        "--seed",
        "2024",
    ]));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 1);
    let fidelity: f64 = rows[0][6].parse().unwrap();
    assert_eq!(fidelity, 0.77371399016645093);
}

#[test]
fn order_find_matches_brute_force() {
    let report = json(&qkit(&["order-find", "--modulus", "35", "--base", "2"]));
    let r = (1..35u64)
        .find(|&r| (0..r).fold(1, |acc, _| acc * 2 % 35) == 1)
        .unwrap();
    assert_eq!(report["order"], r);
    assert_eq!(report["order_verified"], true);
    assert_eq!(report["arg_qubits"], 13);
    assert_eq!(report["total_qubits"], 19);
    assert!(report["transform_report"]["hadamard_count"]
        .as_u64()
        .is_some());
}

#[test]
fn transpile_absorbs_swap_pairs() {
    let out = qkit(&[
        "transpile",
        "--in",
        corpus("swap_pairs.txt").to_str().unwrap(),
        "--coupling",
        corpus("all4.txt").to_str().unwrap(),
    ]);
    let text = stdout(&out);
    let gates: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(gates, ["cx 0 3", "cx 1 3"]);
}

#[test]
fn transpile_report_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("routed.txt");
    let report = dir.path().join("report.json");
    let status = qkit(&[
        "transpile",
        "--in",
        corpus("route5.txt").to_str().unwrap(),
        "--coupling",
        corpus("line5.txt").to_str().unwrap(),
        "--layout",
        "degree-greedy",
        "--out",
        out.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    stdout(&status);
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let stages: Vec<&str> = r["stages"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["stage"].as_str().unwrap())
        .collect();
    assert_eq!(stages.len(), 7);
    assert!(r["swap_inserted"].as_u64().unwrap() > 0);

    let manifest: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("routed.txt.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["digest"], r["manifest_digest"]);
    assert_eq!(manifest["inputs"].as_array().unwrap().len(), 2);
    assert_eq!(manifest["seed"], 0);
}

#[test]
fn zne_without_noise_returns_raw() {
    let report = json(&qkit(&[
        "mitigate",
        "zne",
        "--in",
        corpus("ghz3.txt").to_str().unwrap(),
        "--noise",
        corpus("noiseless.json").to_str().unwrap(),
        "--observable",
        "0,1",
        "--shots",
        "2000",
    ]));
    for point in report["raw"].as_array().unwrap() {
        assert_eq!(point[1], report["mitigated"]);
    }
    assert_eq!(report["mitigated"], 1.0);
}

#[test]
fn mirror_ladder_decreases() {
    let report = json(&qkit(&["mirror", "--seed", "3"]));
    assert_eq!(report["points"].as_array().unwrap().len(), 4);
    assert_eq!(report["strictly_decreasing"], true);
    let noiseless = json(&qkit(&["mirror", "--p-cx", "0", "--shots", "500"]));
    for p in noiseless["points"].as_array().unwrap() {
        assert_eq!(p["survival_probability"], 1.0);
    }
}

#[test]
fn dd_and_twirl_outputs_parse() {
    let twirled = stdout(&qkit(&[
        "mitigate",
        "twirl",
        "--in",
        corpus("ghz3.txt").to_str().unwrap(),
        "--seed",
        "5",
    ]));
    assert!(qkit_core::text::parse_circuit(&twirled).is_ok());
    let dd = stdout(&qkit(&[
        "mitigate",
        "dd",
        "--in",
        corpus("idle3.txt").to_str().unwrap(),
        "--sequence",
        "xyxy",
    ]));
    let dd = qkit_core::text::parse_circuit(&dd).unwrap();
    let orig =
        qkit_core::text::parse_circuit(&std::fs::read_to_string(corpus("idle3.txt")).unwrap())
            .unwrap();
    assert_eq!(dd.len(), orig.len() + 4);
}

#[test]
fn reports_are_byte_identical() {
    let (ghz, noise) = (corpus("ghz3.txt"), corpus("noise_cx.json"));
    let runs: [&[&str]; 4] = [
        &[
            "order-find",
            "--modulus",
            "21",
            "--base",
            "2",
            "--seed",
            "9",
        ],
        &["qft-bench", "--n-max", "6", "--seed", "1"],
        &[
            "mitigate",
            "zne",
            "--in",
            ghz.to_str().unwrap(),
            "--noise",
            noise.to_str().unwrap(),
            "--shots",
            "500",
        ],
        &["mirror", "--shots", "500", "--seed", "2"],
    ];
    for args in runs {
        assert_eq!(stdout(&qkit(args)), stdout(&qkit(args)), "{args:?}");
    }
}
