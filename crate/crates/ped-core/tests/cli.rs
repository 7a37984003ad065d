//! CLI contract tests: exit codes, artifact/metadata pairing, size
//! arithmetic, and the config-file override path.

use std::path::Path;
use std::process::{Command, Output};

fn ped(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ped"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn ped")
}

fn assert_code(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn unknown_flag_exits_2_with_usage() {
    let dir = tempfile::tempdir().unwrap();
    let out = ped(&["generate", "--no-such-flag"], dir.path());
    assert_code(&out, 2);
    let err = String::from_utf8_lossy(&out.stderr).to_lowercase();
    assert!(err.contains("usage") || err.contains("unexpected"));
}

#[test]
fn missing_family_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = ped(
        &["generate", "--n", "10", "--seed", "1", "--out", "x.csv"],
        dir.path(),
    );
    assert_code(&out, 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--family"));
}

#[test]
fn io_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = ped(
        &[
            "select", "--input", "missing.csv", "--target", "y", "--method", "uniform", "--n",
            "5", "--seed", "1", "--out", "o.csv",
        ],
        dir.path(),
    );
    assert_code(&out, 1);
}

#[test]
fn generate_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = ped(
        &[
            "generate", "--family", "radial3", "--n", "2500", "--seed", "7", "--out", "d.csv",
        ],
        dir.path(),
    );
    assert_code(&out, 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("2500"));
    let csv = std::fs::read_to_string(dir.path().join("d.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2501, "header + data rows");
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("d.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["cli"]["seed"], 7);
    assert_eq!(meta["cli"]["flags"]["family"], "radial3");
    assert_eq!(meta["n_rows"], 2500);
}

#[test]
fn select_fraction_floors_size() {
    let dir = tempfile::tempdir().unwrap();
    assert_code(
        &ped(
            &["generate", "--family", "twonorm", "--p", "2", "--n", "20000", "--seed", "1", "--out", "d.csv"],
            dir.path(),
        ),
        0,
    );
    let out = ped(
        &[
            "select", "--input", "d.csv", "--target", "y", "--method", "uniform", "--fraction",
            "0.05", "--seed", "2", "--out", "s.csv",
        ],
        dir.path(),
    );
    assert_code(&out, 0);
    let s = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert_eq!(s.lines().count(), 1001, "header + floor(0.05 * 20000) rows");
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["selection"]["n"], 1000);
}

#[test]
fn ped_select_writes_exact_row_count_and_stratum_table() {
    let dir = tempfile::tempdir().unwrap();
    assert_code(
        &ped(
            &["generate", "--family", "radial3", "--n", "5000", "--seed", "3", "--out", "d.csv"],
            dir.path(),
        ),
        0,
    );
    let out = ped(
        &[
            "select", "--input", "d.csv", "--target", "y", "--method", "ped", "--n", "1000",
            "--seed", "4", "--out", "p.csv",
        ],
        dir.path(),
    );
    assert_code(&out, 0);
    let s = std::fs::read_to_string(dir.path().join("p.csv")).unwrap();
    assert_eq!(s.lines().count(), 1001);
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("p.meta.json")).unwrap())
            .unwrap();
    let strata = meta["selection"]["strata"].as_array().unwrap();
    let total: u64 = strata.iter().map(|s| s["count"].as_u64().unwrap()).sum();
    assert_eq!(total, 5000, "stratum counts cover the full data");
    let picked: u64 = strata.iter().map(|s| s["n_l"].as_u64().unwrap()).sum();
    assert_eq!(picked, 1000);
    assert!(dir.path().join("p.timings.txt").exists());
}

#[test]
fn tight_budget_keeps_leaf_count_under_cap() {
    let dir = tempfile::tempdir().unwrap();
    // Two clean clusters: every candidate partition resolves to two strata,
    // so a budget of n=10 with t_h=5 (cap 2) stays feasible.
    let mut csv = String::from("x,y\n");
    for i in 0..200 {
        let label = i >= 100;
        csv.push_str(&format!("{}.0,{}\n", i, u8::from(label)));
    }
    std::fs::write(dir.path().join("d.csv"), csv).unwrap();
    let out = ped(
        &[
            "select", "--input", "d.csv", "--target", "y", "--method", "ped", "--n", "10",
            "--t-h", "5", "--seed", "5", "--out", "s.csv",
        ],
        dir.path(),
    );
    assert_code(&out, 0);
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("s.meta.json")).unwrap())
            .unwrap();
    let leaves = meta["selection"]["leaf_count"].as_u64().unwrap();
    assert!(leaves <= 2, "leaf count {leaves} exceeds n/t_h = 2");
}

#[test]
fn train_eval_on_separable_data_reports_perfect_accuracy() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("x,y\n");
    for i in 0..80 {
        csv.push_str(&format!("{}.0,{}\n", i, u8::from(i >= 40)));
    }
    std::fs::write(dir.path().join("toy.csv"), &csv).unwrap();
    let out = ped(
        &[
            "train-eval", "--train", "toy.csv", "--test", "toy.csv", "--target", "y", "--seed",
            "6", "--ntree", "20", "--min-node-size", "1", "--out", "r.json",
        ],
        dir.path(),
    );
    assert_code(&out, 0);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap())
            .unwrap();
    assert_eq!(report["accuracy"], 1.0);
    assert_eq!(report["n_test"], 80);
}

#[test]
fn schema_mismatch_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("a.csv"), "x,y\n1.0,p\n2.0,q\n").unwrap();
    std::fs::write(dir.path().join("b.csv"), "x,z,y\n1.0,0.5,p\n2.0,0.1,q\n").unwrap();
    let out = ped(
        &[
            "train-eval", "--train", "a.csv", "--test", "b.csv", "--target", "y", "--seed", "1",
            "--out", "r.json",
        ],
        dir.path(),
    );
    assert_code(&out, 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema"));
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("cfg.json"),
        r#"{"family": "twonorm", "p": 2, "n": 50}"#,
    )
    .unwrap();
    // Flag says 10 rows of radial3; the config overrides family and size.
    let out = ped(
        &[
            "generate", "--family", "radial3", "--n", "10", "--seed", "1", "--out", "d.csv",
            "--config", "cfg.json",
        ],
        dir.path(),
    );
    assert_code(&out, 0);
    let csv = std::fs::read_to_string(dir.path().join("d.csv")).unwrap();
    assert_eq!(csv.lines().count(), 51);
    assert!(csv.starts_with("x1,x2,y"));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("d.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["cli"]["flags"]["family"], "twonorm");
}

#[test]
fn bench_grid_shape_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = ped(
        &[
            "bench", "--family", "twonorm", "--p", "2", "--n-train", "900", "--n-test", "300",
            "--replicates", "2", "--fractions", "0.1,0.2", "--methods", "ped,uniform",
            "--ntree", "10", "--seed", "9", "--out-dir", "out",
        ],
        dir.path(),
    );
    assert_code(&out, 0);
    let results = std::fs::read_to_string(dir.path().join("out/results.csv")).unwrap();
    assert_eq!(results.lines().count(), 1 + 2 * 2 * 2, "header + grid rows");
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["cli"]["flags"]["seed"], "9");
    assert!(dir.path().join("out/summary.md").exists());
    assert!(dir.path().join("out/results.timings.txt").exists());
}

#[test]
fn unknown_suite_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = ped(
        &["bench", "--suite", "nope", "--seed", "1", "--out-dir", "o"],
        dir.path(),
    );
    assert_code(&out, 2);
}
