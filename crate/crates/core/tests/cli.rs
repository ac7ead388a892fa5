//! End-to-end runs of the `pincer-ml` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

fn pincer_ml(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pincer-ml"))
        .args(args)
        .env_remove("PINCER_ML_SEED")
        .output()
        .expect("binary runs")
}

fn bookstore_args<'a>(
    command: &'a str,
    tax: &'a str,
    txn: &'a str,
    minsup: &'a str,
) -> Vec<&'a str> {
    vec![
        command,
        "--taxonomy",
        tax,
        "--transactions",
        txn,
        "--minsup",
        minsup,
    ]
}

fn json_body(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
    v.as_object_mut().unwrap().remove("meta");
    v
}

#[test]
fn mine_is_deterministic() {
    let (tax, txn) = (data("bookstore_taxonomy.csv"), data("bookstore.csv"));
    let (tax, txn) = (tax.to_str().unwrap(), txn.to_str().unwrap());
    let a = pincer_ml(&bookstore_args("mine", tax, txn, "3,2,2"));
    let b = pincer_ml(&bookstore_args("mine", tax, txn, "3,2,2"));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let body = json_body(&a);
    assert_eq!(body["levels"].as_array().unwrap().len(), 3);
}

#[test]
fn out_flag_writes_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let (tax, txn) = (data("bookstore_taxonomy.csv"), data("bookstore.csv"));
    let (tax, txn) = (tax.to_str().unwrap(), txn.to_str().unwrap());
    let mut args = bookstore_args("mine", tax, txn, "3,2,2");
    args.extend(["--out", out.to_str().unwrap()]);
    let written = pincer_ml(&args);
    assert!(written.status.success());
    assert!(written.stdout.is_empty());
    let printed = pincer_ml(&bookstore_args("mine", tax, txn, "3,2,2"));
    assert_eq!(std::fs::read(&out).unwrap(), printed.stdout);
}

#[test]
fn missing_file_exits_with_config_code() {
    let txn = data("bookstore.csv");
    let out = pincer_ml(&bookstore_args(
        "mine",
        "/no/such/taxonomy.csv",
        txn.to_str().unwrap(),
        "3,2,2",
    ));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/no/such/taxonomy.csv"));
}

#[test]
fn invalid_threshold_exits_with_config_code() {
    let (tax, txn) = (data("bookstore_taxonomy.csv"), data("bookstore.csv"));
    let out = pincer_ml(&bookstore_args(
        "mine",
        tax.to_str().unwrap(),
        txn.to_str().unwrap(),
        "3,0,2",
    ));
    assert_eq!(out.status.code(), Some(2));
    let out = pincer_ml(&[
        "mine",
        "--taxonomy",
        tax.to_str().unwrap(),
        "--transactions",
        txn.to_str().unwrap(),
        "--minsup",
        "3,2,2",
        "--min-conf",
        "1.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fractional_thresholds_match_absolute_counts() {
    let (tax, txn) = (data("bookstore_taxonomy.csv"), data("bookstore.csv"));
    let (tax, txn) = (tax.to_str().unwrap(), txn.to_str().unwrap());
    let absolute = pincer_ml(&bookstore_args("mine", tax, txn, "3,2,2"));
    let mut args = bookstore_args("mine", tax, txn, "0.2,0.13,0.13");
    args.extend(["--support-mode", "fractional"]);
    let fractional = pincer_ml(&args);
    assert_eq!(json_body(&absolute), json_body(&fractional));
}

#[test]
fn empty_dataset_compares_with_zero_passes() {
    let dir = tempfile::tempdir().unwrap();
    let txn = dir.path().join("empty.csv");
    std::fs::write(&txn, "tid,item\n").unwrap();
    let tax = data("bookstore_taxonomy.csv");
    let out = pincer_ml(&bookstore_args(
        "compare",
        tax.to_str().unwrap(),
        txn.to_str().unwrap(),
        "3,2,2",
    ));
    let body = json_body(&out);
    assert_eq!(body["total_passes"], serde_json::json!([0, 0]));
    assert_eq!(body["levels"], serde_json::json!([]));
}

#[test]
fn compare_text_shows_both_algorithms() {
    let (tax, txn) = (data("bookstore_taxonomy.csv"), data("bookstore.csv"));
    let mut args = bookstore_args(
        "compare",
        tax.to_str().unwrap(),
        txn.to_str().unwrap(),
        "3,2,2",
    );
    args.extend(["--format", "text"]);
    let out = pincer_ml(&args);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("passes: pincer 3, apriori 4"));
}

#[test]
fn gen_then_oracle_check() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let gen = pincer_ml(&["gen", "--out-dir", d, "--seed", "11"]);
    assert!(
        gen.status.success(),
        "{}",
        String::from_utf8_lossy(&gen.stderr)
    );
    let tax = dir.path().join("taxonomy.csv");
    let txn = dir.path().join("transactions.csv");
    let check = pincer_ml(&bookstore_args(
        "oracle-check",
        tax.to_str().unwrap(),
        txn.to_str().unwrap(),
        "12,8,6",
    ));
    assert!(
        check.status.success(),
        "{}",
        String::from_utf8_lossy(&check.stdout)
    );
}

#[test]
fn gen_respects_seed_environment() {
    let dirs: Vec<_> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    let run = |dir: &Path, seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_pincer-ml"))
            .args(["gen", "--out-dir", dir.to_str().unwrap()])
            .env("PINCER_ML_SEED", seed)
            .output()
            .unwrap();
        std::fs::read(dir.join("transactions.csv")).unwrap()
    };
    let a = run(dirs[0].path(), "5");
    let b = run(dirs[1].path(), "5");
    let c = run(dirs[2].path(), "6");
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn oracle_limit_exits_with_code_three() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    // 26 level-1 categories exceed the brute-force vocabulary limit.
    let gen = pincer_ml(&["gen", "--out-dir", d, "--categories", "26", "--seed", "1"]);
    assert!(gen.status.success());
    let tax = dir.path().join("taxonomy.csv");
    let txn = dir.path().join("transactions.csv");
    let out = pincer_ml(&bookstore_args(
        "oracle-check",
        tax.to_str().unwrap(),
        txn.to_str().unwrap(),
        "10,5,5",
    ));
    assert_eq!(out.status.code(), Some(3));
}
