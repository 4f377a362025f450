//! Acceptance criteria 1-11 and the `run all` runtime budget under the default
//! configuration. Each test writes one result line to stderr.

use cli::criteria::{self, BUDGET_SECS, RUN_ALL_BUDGET_SECS};
use cli::{Check, RunConfig, Status};
use std::io::Write;
use std::path::PathBuf;
use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

/// Serializes the criteria so each one is timed alone.
static SERIAL: Mutex<()> = Mutex::new(());

fn default_cfg_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../config/default.cfg")
}

fn report(line: &str) {
    // Written to the raw handle so the line survives output capture.
    let _ = writeln!(std::io::stderr(), "{line}");
}

fn criterion(k: u32) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let cfg = RunConfig::read(&default_cfg_path()).expect("default config");
    let budget = Duration::from_secs(BUDGET_SECS[k as usize]);
    let start = Instant::now();
    let result = criteria::run(k, &cfg);
    let elapsed = start.elapsed();
    let (checks, error): (Vec<Check>, Option<String>) = match result {
        Ok(c) => (c, None),
        Err(f) => (vec![], Some(format!("{:?}: {}", f.kind, f.message))),
    };
    let failing: Vec<&str> = checks.iter().filter(|c| c.status != Status::Pass).map(|c| c.name.as_str()).collect();
    let pass = error.is_none() && failing.is_empty() && !checks.is_empty() && elapsed <= budget;
    report(&format!(
        "criterion {k:>2}: {} ({} checks, {:.2} s of {} s){}{}",
        if pass { "PASS" } else { "FAIL" },
        checks.len(),
        elapsed.as_secs_f64(),
        budget.as_secs(),
        if failing.is_empty() { String::new() } else { format!("; failing: {}", failing.join(", ")) },
        error.map(|e| format!("; error: {e}")).unwrap_or_default(),
    ));
    for c in checks.iter().filter(|c| c.status != Status::Pass) {
        report(&format!("    {} witness: {}", c.name, c.witness));
    }
    assert!(pass, "criterion {k} failed");
}

#[test]
fn criterion_01_iwasawa_identities() {
    criterion(1);
}

#[test]
fn criterion_02_signed_round_trip() {
    criterion(2);
}

#[test]
fn criterion_03_stabilization() {
    criterion(3);
}

#[test]
fn criterion_04_matrix_bridge() {
    criterion(4);
}

#[test]
fn criterion_05_log_matrix() {
    criterion(5);
}

#[test]
fn criterion_06_coset_lemmas() {
    criterion(6);
}

#[test]
fn criterion_07_klz_identities() {
    criterion(7);
}

#[test]
fn criterion_08_theta_tower() {
    criterion(8);
}

#[test]
fn criterion_09_three_term_theta() {
    criterion(9);
}

#[test]
fn criterion_10_signed_pipeline() {
    criterion(10);
}

#[test]
fn criterion_11_euler() {
    criterion(11);
}

#[test]
fn criterion_12_run_all_within_budget() {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("all.json");
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_ptower"))
        .env_remove(cli::CONFIG_ENV)
        .args(["run", "all"])
        .arg(default_cfg_path())
        .arg("--out")
        .arg(&cert)
        .output()
        .unwrap();
    let elapsed = start.elapsed();
    let code = out.status.code();
    let completed = matches!(code, Some(0 | 1)) && cert.exists();
    let pass = completed && elapsed <= Duration::from_secs(RUN_ALL_BUDGET_SECS);
    report(&format!(
        "run all     : {} ({:.2} s of {} s, exit {:?})",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        RUN_ALL_BUDGET_SECS,
        code,
    ));
    assert!(pass, "run all did not complete within the budget");
}
