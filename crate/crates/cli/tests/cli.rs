use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn pfk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pfk")).args(args).env_remove("PFK_THREADS").output().expect("pfk runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pfk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn module_ranks(json: &[u8]) -> Vec<usize> {
    let v: Value = serde_json::from_slice(json).unwrap();
    v["modules"].as_array().unwrap().iter().map(|m| m.as_array().unwrap().len()).collect()
}

fn squash(s: &str) -> Vec<String> {
    s.lines().map(|l| l.split_whitespace().collect::<Vec<_>>().join(" ")).collect()
}

#[test]
fn build_c_writes_the_resolution_of_m1() {
    let path = scratch("c21.json");
    let out = pfk(&["build", "--family", "c", "--n", "2", "--i", "1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let first = std::fs::read(&path).unwrap();
    assert_eq!(module_ranks(&first), vec![5, 10, 10, 5]);
    // idempotent, and independent of the worker count
    let again = pfk(&["build", "--family", "c", "--n", "2", "--i", "1", "--threads", "3"]);
    assert_eq!(again.stdout, first);
    let check = pfk(&["verify", "complex", "--in", path.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(0));
}

#[test]
fn build_koszul_families() {
    let k = pfk(&["build", "--family", "koszul-pfaffian", "--n", "2"]);
    assert_eq!(module_ranks(&k.stdout), vec![1, 5, 10, 10, 5, 1]);
    let hu = pfk(&["build", "--family", "koszul-hu", "--n", "3"]);
    assert_eq!(module_ranks(&hu.stdout)[1], 7);
}

#[test]
fn hu_cycle_check_passes() {
    let out = pfk(&["verify", "hu", "--n", "3", "--check", "h2-cycle"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let r = &v["reports"][0];
    assert_eq!(r["status"], "pass");
    assert_eq!(r["seed"], 42);
    assert!(r["timing_ms"].is_null());
}

#[test]
fn filtration_report_renders_as_tables() {
    let path = scratch("filtration.json");
    let out = pfk(&["verify", "filtration", "--n", "2", "--max-deg", "6", "--field", "zp:32003", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = pfk(&["report", "--in", path.to_str().unwrap()]);
    let lines = squash(&String::from_utf8(text.stdout).unwrap());
    let at = lines.iter().position(|l| l == "hf (j = 1)").expect("H1 table");
    assert_eq!(lines[at + 1], "d: 0 1 2 3 4 5 6");
    assert_eq!(lines[at + 3], "dim: 0 0 0 5 40 175 560");
    let csv = pfk(&["report", "--in", path.to_str().unwrap(), "--format", "csv"]);
    let csv = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "check,label,j,degree,predicted,computed,status");
    assert!(csv.lines().any(|l| l == "filtration,hf,1,4,40,40,pass"));
}

#[test]
fn bigraded_betti_renders_as_a_list() {
    let out = pfk(&["verify", "betti", "--family", "koszul-hu", "--n", "3", "--j", "1", "--max-deg", "3,2", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("beta0 (j = 1): (1,2):1 (3,1):6"), "{text}");
}

#[test]
fn empty_and_malformed_reports() {
    let empty = scratch("empty.json");
    std::fs::write(&empty, r#"{"reports": []}"#).unwrap();
    let out = pfk(&["report", "--in", empty.to_str().unwrap()]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "no checks run\n");
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{\"reports\": [1]}").unwrap();
    assert_eq!(pfk(&["report", "--in", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(pfk(&["verify", "filtration", "--n", "2", "--field", "zp:4"]).status.code(), Some(2));
    assert_eq!(pfk(&["verify", "complex", "--family", "c", "--n", "2", "--i", "2"]).status.code(), Some(2));
    assert_eq!(pfk(&["verify", "complex", "--family", "c", "--n", "2", "--threads", "0"]).status.code(), Some(2));
    assert_eq!(pfk(&["build", "--family", "c", "--n", "2"]).status.code(), Some(2));
    assert_eq!(pfk(&["verify", "complex", "--in", "/nonexistent/c.json"]).status.code(), Some(2));
    assert_eq!(pfk(&["verify", "hu", "--n", "3", "--max-deg", "4"]).status.code(), Some(2));
    let env = Command::new(env!("CARGO_BIN_EXE_pfk"))
        .args(["verify", "complex", "--family", "koszul-pfaffian", "--n", "1"])
        .env("PFK_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(2));
}

#[test]
fn budget_truncates_without_failing() {
    let out = pfk(&["verify", "filtration", "--n", "2", "--max-deg", "6", "--budget", "3000"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["reports"][0]["status"], "truncated");
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn timing_is_opt_in() {
    let out = pfk(&["verify", "complex", "--family", "koszul-pfaffian", "--n", "1", "--timing"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["reports"][0]["timing_ms"].is_u64());
}

#[test]
fn seed_and_primes_are_recorded() {
    let a = pfk(&["verify", "be-ranks", "--family", "c", "--n", "2", "--i", "1", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["reports"][0]["seed"], 7);
    assert_eq!(v["reports"][0]["primes"], serde_json::json!([32003, 65521]));
}
