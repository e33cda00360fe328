//! End-to-end runs of the installed binary: the documented one-liners, exit
//! codes, config precedence, cache lifecycle, and byte-level determinism.

use std::path::Path;
use std::process::{Command, Output};

fn rspin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rspin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn single_count_query_prints_the_bare_rational() {
    let out = rspin(&["hurwitz", "--g", "0", "--r", "1", "--profile", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1/2\n");
}

#[test]
fn count_vs_intersection_query_prints_both_routes() {
    let out = rspin(&["elsv", "--g", "1", "--n", "1", "--r", "1", "--k", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "h=0\nf=0\nverdict PASS\n");
}

#[test]
fn campaign_run_passes_and_is_deterministic() {
    let a = rspin(&["verify-all", "--r", "2", "--max-euler", "2"]);
    assert!(a.status.success(), "stderr: {}", String::from_utf8_lossy(&a.stderr));
    let text = stdout(&a);
    for suite in ["hurwitz", "elsv", "spectral-lemmas", "matrix-model", "kp"] {
        assert!(
            text.lines().any(|l| l.starts_with("PASS ") && l.contains(suite)),
            "missing PASS line for {suite} in:\n{text}"
        );
    }
    let b = rspin(&["verify-all", "--r", "2", "--max-euler", "2"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sampled_reports_record_the_seed_and_repeat_byte_for_byte() {
    let a = rspin(&["matrix-model", "--seed", "7", "--format", "json"]);
    let b = rspin(&["matrix-model", "--seed", "7", "--format", "json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("\"seed\": 7"));
    assert!(stdout(&a).contains("\"format\": \"matrix-model-report-v1\""));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.toml");
    std::fs::write(&conf, "r = 1\norder = 3\n").unwrap();
    let conf = conf.to_str().unwrap();

    let from_file = rspin(&["spectral-lemmas", "--config", conf]);
    assert!(from_file.status.success());
    assert!(!stdout(&from_file).contains("| 2 |"), "file pins r to 1");

    let overridden = rspin(&["spectral-lemmas", "--config", conf, "--r", "2"]);
    assert!(overridden.status.success());
    assert!(stdout(&overridden).contains("| odd-expansion | 2 | 3 | PASS |"));
}

#[test]
fn config_and_usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "bogus = 1\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["spectral-lemmas", "--config", bad.to_str().unwrap()],
        vec!["spectral-lemmas", "--config", "/nonexistent/conf.toml"],
        vec!["hurwitz", "--g", "0", "--r", "1"],
        vec!["hurwitz", "--g", "0", "--r", "0", "--profile", "2"],
        vec!["hurwitz", "--g", "0", "--r", "1", "--profile", "2,0"],
        vec!["elsv", "--g", "1", "--n", "2", "--r", "1", "--k", "1"],
        vec!["elsv", "--g", "1", "--n", "1", "--r", "2", "--k", "2"],
        vec!["elsv", "--g", "0", "--n", "1", "--r", "1", "--k", "1"],
        vec!["not-a-command"],
    ];
    for args in cases {
        let out = rspin(&args);
        assert_eq!(out.status.code(), Some(2), "args {args:?} should exit 2");
    }
}

#[test]
fn cache_round_trips_and_never_changes_values() {
    let dir = tempfile::tempdir().unwrap();
    let cache_flag = dir.path().to_str().unwrap();
    let args = ["elsv", "--g", "1", "--n", "1", "--r", "2", "--k", "3", "--cache-dir", cache_flag];

    let first = rspin(&args);
    assert!(first.status.success());
    let cache_file = Path::new(cache_flag).join("psi-cache.json");
    let written = std::fs::read_to_string(&cache_file).unwrap();
    assert!(written.contains("\"format\": \"psi-cache-v1\""));

    // Warm-cache run, cold run after deletion, and a run against a corrupt
    // cache must all print the same bytes and succeed.
    let warm = rspin(&args);
    std::fs::remove_file(&cache_file).unwrap();
    let cold = rspin(&args);
    std::fs::write(&cache_file, "garbage{{{").unwrap();
    let corrupt = rspin(&args);
    assert!(corrupt.status.success());
    assert_eq!(first.stdout, warm.stdout);
    assert_eq!(first.stdout, cold.stdout);
    assert_eq!(first.stdout, corrupt.stdout);
}

#[test]
fn evidence_mode_downgrades_unproved_cells_to_reports() {
    let asserted = rspin(&["elsv", "--g", "1", "--n", "2", "--r", "2", "--k", "2,2"]);
    assert!(asserted.status.success());
    assert!(stdout(&asserted).ends_with("verdict PASS\n"));

    let reported = rspin(&[
        "elsv", "--g", "1", "--n", "2", "--r", "2", "--k", "2,2", "--evidence-mode", "false",
    ]);
    assert!(reported.status.success());
    assert!(stdout(&reported).ends_with("verdict REPORTED\n"));
}

#[test]
fn tabular_formats_carry_the_same_values() {
    let csv = rspin(&["hurwitz", "--g", "0", "--r", "1", "--profile", "3", "--format", "csv"]);
    assert!(csv.status.success());
    assert_eq!(stdout(&csv), "g,r,k,m,h,provenance\n0,1,3,2,1,character\n0,1,3,2,1,oracle\n");

    let json = rspin(&["hurwitz", "--g", "0", "--r", "1", "--profile", "3", "--format", "json"]);
    assert!(json.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(doc["format"], "hurwitz-report-v1");
    assert_eq!(doc["table"]["format"], "hurwitz-table-v1");
    assert_eq!(doc["table"]["rows"][0]["h"], "1");
}
