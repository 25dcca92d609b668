use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

fn qforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qforge"))
        .args(args)
        .env_remove("QFORGE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Splits a text report into `(name, result, output)` per case.
fn case_blocks(text: &str) -> Vec<(String, String, String)> {
    let mut cases = Vec::new();
    for block in text.split("Testing ").skip(1) {
        let name = block.lines().next().unwrap().trim_end_matches(':').to_string();
        let field = |key: &str| {
            block
                .lines()
                .find_map(|l| l.strip_prefix(key))
                .map(|v| v.trim().to_string())
                .unwrap_or_default()
        };
        cases.push((name, field("Result:"), field("Output:")));
    }
    cases
}

#[test]
fn adder_passes_all_vectors() {
    let out = qforge(&["test", &fixture("full_adder.qasm"), "--vectors", &fixture("adder_vectors.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let cases = case_blocks(&stdout(&out));
    assert_eq!(cases.len(), 5);
    assert!(cases.iter().all(|c| c.1 == "PASS"));
    assert!(stdout(&out).contains("Summary: 5 passed, 0 failed, 0 errors (5 cases)"));
}

#[test]
fn buggy_adder_fails_tests_one_and_five() {
    let out = qforge(&[
        "test",
        &fixture("full_adder_buggy.qasm"),
        "--vectors",
        &fixture("adder_vectors.json"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let cases = case_blocks(&stdout(&out));
    let failed: Vec<_> = cases.iter().filter(|c| c.1 == "FAIL").collect();
    assert_eq!(failed.len(), 2);
    assert_eq!((failed[0].0.as_str(), failed[0].2.as_str()), ("test 1", "[1, 1, 1, 0]"));
    assert_eq!((failed[1].0.as_str(), failed[1].2.as_str()), ("test 5", "[1, 1, 0, 0]"));
}

#[test]
fn json_and_text_verdicts_agree() {
    let args = ["test", &fixture("full_adder_buggy.qasm"), "--vectors", &fixture("adder_vectors.json")];
    let text = qforge(&args);
    let json = qforge(&[&args[..], &["--json"]].concat());
    assert_eq!(text.status.code(), json.status.code());
    let report: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    let json_statuses: Vec<&str> = report["cases"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["status"].as_str().unwrap())
        .collect();
    let text_statuses: Vec<String> = case_blocks(&stdout(&text)).into_iter().map(|c| c.1).collect();
    assert_eq!(json_statuses, text_statuses);
    assert_eq!(report["failed"], 2);
}

#[test]
fn shot_mode_prints_seed_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let gen = dir.path().join("ghz3.json");
    let out = qforge(&["gen-tests", "ghz", "--qubits", "3", "-o", gen.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let run = |seed: &str| {
        qforge(&[
            "test",
            &fixture("ghz3.qasm"),
            "--vectors",
            gen.to_str().unwrap(),
            "--mode",
            "fquant",
            "--shots",
            "4096",
            "--seed",
            seed,
        ])
    };
    let (a, b) = (run("7"), run("7"));
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert!(stdout(&a).starts_with("seed: 7\n"));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn width_mismatch_is_not_a_pass() {
    let out = qforge(&["test", &fixture("ghz3.qasm"), "--vectors", &fixture("w2_vectors.json")]);
    assert_ne!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn seed_defaults_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_qforge"))
        .args(["swap-test", &fixture("plus.qasm"), &fixture("plus_phase.qasm")])
        .env("QFORGE_SEED", "42")
        .output()
        .unwrap();
    assert!(stdout(&out).starts_with("seed: 42\n"));
}

#[test]
fn malformed_vectors_exit_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "[\n  {\"name\": \"t\", \"input\": [0, 0,\n").unwrap();
    let out = qforge(&["test", &fixture("full_adder.qasm"), "--vectors", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3, column"), "{}", stderr(&out));

    fs::write(&bad, "[{\"name\": \"t\", \"input\": [0, 0, 0, 0]}]").unwrap();
    let out = qforge(&["test", &fixture("full_adder.qasm"), "--vectors", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("expected_output"), "{}", stderr(&out));
}

#[test]
fn parse_errors_exit_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.qasm");
    fs::write(&bad, "OPENQASM 2.0;\nqreg q[2];\nfoo q[0];\n").unwrap();
    let out = qforge(&["counts", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3, column 1"), "{}", stderr(&out));
    assert_eq!(qforge(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(qforge(&["counts", &fixture("qft4.qasm"), "--expect", "qft:x"]).status.code(), Some(2));
}

#[test]
fn counts_ok_and_mismatch() {
    let out = qforge(&["counts", &fixture("qft4.qasm"), "--expect", "qft:4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "OK {H:4, CP:6, SWAP:2}");

    let out = qforge(&["counts", &fixture("qft4_missing_h.qasm"), "--expect", "qft:4"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "H: expected 4, found 3"), "{text}");
    assert_eq!(text.lines().filter(|l| l.contains(": expected ")).count(), 1);

    let out = qforge(&["counts", &fixture("qft3_missing_h.qasm"), "--expect", "qft:3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("H: expected 3, found 2"));
}

#[test]
fn counts_json() {
    let out = qforge(&["counts", &fixture("qft4_missing_h.qasm"), "--expect", "qft:4", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ok"], false);
    assert_eq!(v["mismatches"][0]["gate"], "H");
    assert_eq!(v["mismatches"][0]["found"], 3);
}

#[test]
fn grover_slices_into_three_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = qforge(&["slice", &fixture("grover3.qasm"), "--out-dir", d]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    for k in 1..=3 {
        assert!(dir.path().join(format!("grover3.slice{k}.qasm")).exists());
    }
    assert!(!dir.path().join("grover3.slice4.qasm").exists());
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("grover3.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["cut_positions"].as_array().unwrap().len(), 2);
    assert_eq!(manifest["slices"].as_array().unwrap().len(), 3);
    // every slice file parses again
    for k in 1..=3 {
        let f = dir.path().join(format!("grover3.slice{k}.qasm"));
        assert_eq!(qforge(&["counts", f.to_str().unwrap()]).status.code(), Some(0));
    }
}

#[test]
fn file_without_cuts_gives_one_slice() {
    let dir = tempfile::tempdir().unwrap();
    let out = qforge(&["slice", &fixture("ghz3.qasm"), "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("ghz3.slice1.qasm").exists());
    assert!(!dir.path().join("ghz3.slice2.qasm").exists());
}

#[test]
fn strip_idle_drops_unused_wire() {
    let dir = tempfile::tempdir().unwrap();
    let out = qforge(&[
        "slice",
        &fixture("idle_wire.qasm"),
        "--strip-idle",
        "--out-dir",
        dir.path().to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let manifest: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for slice in manifest["slices"].as_array().unwrap() {
        assert!(slice["removed_qubits"].as_array().unwrap().contains(&3.into()));
        assert!(slice["num_qubits"].as_u64().unwrap() <= 3);
    }
    let whole = qforge(&["slice", &fixture("ghz3.qasm"), "--strip-idle", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(whole.status.code(), Some(0));
}

#[test]
fn accumulated_final_slice_tests_like_the_original() {
    let dir = tempfile::tempdir().unwrap();
    let out = qforge(&[
        "slice",
        &fixture("full_adder.qasm"),
        "--mode",
        "accumulated",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let last = dir.path().join("full_adder.slice1.qasm");
    let a = qforge(&["test", last.to_str().unwrap(), "--vectors", &fixture("adder_vectors.json")]);
    let b = qforge(&["test", &fixture("full_adder.qasm"), "--vectors", &fixture("adder_vectors.json")]);
    let verdicts = |o: &Output| case_blocks(&stdout(o)).into_iter().map(|c| c.1).collect::<Vec<_>>();
    assert_eq!(verdicts(&a), verdicts(&b));
}

#[test]
fn swap_test_recovers_pi_over_three() {
    let out = qforge(&["swap-test", &fixture("plus.qasm"), &fixture("plus_phase.qasm"), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let (s, dtheta, stderr) = (
        v["s"].as_f64().unwrap(),
        v["delta_theta"].as_f64().unwrap(),
        v["stderr"].as_f64().unwrap(),
    );
    assert_eq!(v["shots"], 8192);
    assert!((s - 0.75).abs() <= 3.0 * stderr, "s = {s}");
    assert!((dtheta - PI / 3.0).abs() < 0.06, "dtheta = {dtheta}");

    let text = stdout(&qforge(&["swap-test", &fixture("plus.qasm"), &fixture("plus_phase.qasm")]));
    assert!(text.lines().any(|l| l.starts_with("s: ")));
    assert!(text.lines().any(|l| l.starts_with("delta_theta: ")));

    let exact = qforge(&["swap-test", &fixture("plus.qasm"), &fixture("plus_phase.qasm"), "--exact", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&exact.stdout).unwrap();
    assert!((v["delta_theta"].as_f64().unwrap() - PI / 3.0).abs() < 1e-9);
}

#[test]
fn categorize_verdicts() {
    let verdict = |f: &str| {
        let out = qforge(&["categorize", &fixture(f), "--json"]);
        assert_eq!(out.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        v["verdict"].as_str().unwrap().to_string()
    };
    assert_eq!(verdict("full_adder.qasm"), "AP");
    assert_eq!(verdict("qft3.qasm"), "AR");
    assert_eq!(verdict("plus_phase.qasm"), "AR");
    let text = stdout(&qforge(&["categorize", &fixture("full_adder.qasm")]));
    assert!(text.starts_with("AP (gate-set)"));
}

#[test]
fn locate_reports_positions() {
    let out = qforge(&["locate", &fixture("qft3_missing_h.qasm"), "--gate", "h", "--qubits", "q[0]"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0 match(es)"));

    let out = qforge(&["locate", &fixture("qft3.qasm"), "--gate", "h", "--json"]);
    let hits: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(hits.as_array().unwrap().len(), 3);
    assert!(hits[0]["line"].as_u64().unwrap() > 0);
    assert!(hits[0]["origin"].as_str().unwrap().ends_with("qft3.qasm"));

    let out = qforge(&["locate", &fixture("qft3.qasm"), "--gate", "h", "--qubits", "r[0]"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_tests_dicke_amplitudes() {
    let out = qforge(&["gen-tests", "dicke", "--qubits", "3", "--hamming", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let cases: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cases.as_array().unwrap().len(), 6);
    assert_eq!(cases[0]["name"], "test 0");
    let expected = cases[0]["expected_output"].as_array().unwrap();
    for (i, amp) in expected.iter().enumerate() {
        let re = amp[0].as_f64().unwrap();
        let want = if [3, 5, 6].contains(&i) { 0.577 } else { 0.0 };
        assert!((re - want).abs() < 5e-3, "index {i}: {re}");
    }
    assert_eq!(qforge(&["gen-tests", "dicke", "--qubits", "3"]).status.code(), Some(2));
    assert_eq!(qforge(&["gen-tests", "dicke", "--qubits", "2", "--hamming", "3"]).status.code(), Some(2));
}

#[test]
fn inject_reproduces_buggy_adder() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("bug.qasm");
    let out = qforge(&[
        "inject",
        &fixture("full_adder.qasm"),
        "--bug",
        "extra-gate",
        "--gate",
        "ccx",
        "--qubits",
        "q[0],q[1],q[3]",
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("changes the unitary"));
    let report = qforge(&["test", out_path.to_str().unwrap(), "--vectors", &fixture("adder_vectors.json")]);
    assert_eq!(report.status.code(), Some(1));
    let failed: Vec<String> = case_blocks(&stdout(&report))
        .into_iter()
        .filter(|c| c.1 == "FAIL")
        .map(|c| c.0)
        .collect();
    assert_eq!(failed, ["test 1", "test 5"]);
}

#[test]
fn inject_flags_silent_mutation_and_random_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("z.qasm");
    // a full-turn phase shift leaves the unitary unchanged
    let out = qforge(&[
        "inject",
        &fixture("plus_phase.qasm"),
        "--bug",
        "phase-shift",
        "--index",
        "1",
        "--delta",
        "2*pi",
        "-o",
        p.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("silent mutation"));

    let run = || {
        qforge(&["inject", &fixture("ghz3.qasm"), "--bug", "random", "--seed", "3", "-o", p.to_str().unwrap(), "--json"])
    };
    let (a, b) = (run(), run());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 3);

    let out = qforge(&["inject", &fixture("ghz3.qasm"), "--bug", "missing-gate", "-o", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn qsphere_export() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("q.json");
    let out = qforge(&["qsphere", &fixture("ghz3.qasm"), "-o", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let nodes: serde_json::Value = serde_json::from_str(&fs::read_to_string(&p).unwrap()).unwrap();
    let nodes = nodes.as_array().unwrap();
    assert_eq!(nodes.len(), 2);
    assert_eq!(nodes[0]["index"], 0);
    assert_eq!(nodes[1]["index"], 7);
    assert_eq!(nodes[1]["weight"], 3);
    assert!((nodes[1]["probability"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}
