use std::process::{Command, Output};

use serde_json::Value;

fn zernike(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zernike")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_cubic() {
    let out = zernike(&["verify", "--N", "3"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["schema_version"], "1.0.0");
    assert_eq!(doc["command"], "verify");
    assert_eq!(doc["results"]["passed"], true);
    assert_eq!(doc["results"]["residual_terms"]["[I,H]"], 0);
}

#[test]
fn conjecture_check_quadratic() {
    let out = zernike(&["conjecture-check", "--N", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert_eq!(doc["results"]["factorization"]["passed"], true);
    assert_eq!(doc["results"]["closed_forms"]["holds"], true);
}

#[test]
fn conjecture_check_beyond_explicit_symmetries() {
    let out = zernike(&["conjecture-check", "--N", "6"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert_eq!(doc["results"]["factorization"]["passed"], true);
    assert_eq!(doc["results"]["factorization"]["dependence_residual_terms"], 0);
}

#[test]
fn higgs_order_is_measured_for_derived_symmetries() {
    let out = zernike(&["higgs", "--N", "6"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert_eq!(doc["results"]["symmetries"], "derived");
    assert_eq!(doc["results"]["relations"]["measured_order"], 11);
    assert_eq!(doc["results"]["factorization_holds"], true);
}

#[test]
fn figure_two_truncates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig2.csv");
    let out = zernike(&["figure", "--id", "2", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&path).unwrap();
    let last = |series: &str| {
        csv.lines()
            .filter(|l| l.starts_with(&format!("{series},")))
            .map(|l| l.split(',').nth(1).unwrap().parse::<u32>().unwrap())
            .max()
    };
    assert_eq!(last("kappa=-0.25"), Some(4));
    assert_eq!(last("kappa=-0.16"), Some(6));
    assert_eq!(last("kappa=-0.12"), Some(8));
}

#[test]
fn zernike_table() {
    let out = zernike(&["spectrum", "--N", "2", "--gammas", "2i,-1", "--symbolic", "--n", "1..3", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "n,E,unitary\n1,3,true\n2,8,true\n3,15,true\n");
}

#[test]
fn numeric_counts() {
    let out = zernike(&["spectrum", "--N", "3", "--gammas", "17/3+2i,-5/7+1/2i,3/11-4/9i", "--n", "3"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["results"]["levels"][0]["solution_count"], 10);
}

#[test]
fn oracle_matches_type_one() {
    let out = zernike(&["oracle", "--N", "3", "--gammas", "2i,-1,1/10i", "--max-degree", "8"]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["results"]["type_i"]["status"], "matched");
    assert_eq!(doc["results"]["type_ii"]["status"], "not_oracle_comparable");
}

#[test]
fn exact_and_float_oscillators() {
    let exact = json(&zernike(&["oscillator", "--kappa", "-1/4", "--n", "1..5"]));
    assert_eq!(exact["results"]["exact"], true);
    assert_eq!(exact["results"]["levels"][3]["E"], "4");
    let float = json(&zernike(&["oscillator", "--kappa", "-0.25", "--n", "1..5"]));
    assert_eq!(float["results"]["exact"], false);
    assert_eq!(float["results"]["n_max"], 4);
}

#[test]
fn decimal_gammas_are_rejected() {
    let out = zernike(&["spectrum", "--N", "1", "--gammas", "0.5i", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let doc = json(&out);
    assert!(doc["error"].as_str().unwrap().contains("decimal"));
}

#[test]
fn unsupported_order_is_a_structured_error() {
    let out = zernike(&["verify", "--N", "7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"].is_string());
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_zernike"))
            .args(["oracle", "--N", "2", "--gammas", "2i,-1", "--max-degree", "10", "--eigenvectors"])
            .env("ZERNIKE_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("4"));
}
