//! Named suites grouping criteria, and the run driver producing a certificate.

use crate::certificate::{Body, Certificate, Check, ErrorKind, Status, SuiteError, SuiteResult, Timing, SCHEMA, SCHEMA_VERSION};
use crate::config::RunConfig;
use crate::criteria;
use rayon::prelude::*;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Logmat,
    Decompose,
    Stabilize,
    CosetVerify,
    ThetaTower,
    SignedTheta,
    EulerCheck,
    All,
}

pub const SUITES: [Suite; 7] = [
    Suite::Logmat,
    Suite::Decompose,
    Suite::Stabilize,
    Suite::CosetVerify,
    Suite::ThetaTower,
    Suite::SignedTheta,
    Suite::EulerCheck,
];

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Logmat => "logmat",
            Suite::Decompose => "decompose",
            Suite::Stabilize => "stabilize",
            Suite::CosetVerify => "coset-verify",
            Suite::ThetaTower => "theta-tower",
            Suite::SignedTheta => "signed-theta",
            Suite::EulerCheck => "euler-check",
            Suite::All => "all",
        }
    }

    pub fn criteria(self) -> &'static [u32] {
        match self {
            Suite::Logmat => &[1, 5],
            Suite::Decompose => &[2],
            Suite::Stabilize => &[3, 4],
            Suite::CosetVerify => &[6, 7],
            Suite::ThetaTower => &[8, 9],
            Suite::SignedTheta => &[10],
            Suite::EulerCheck => &[11],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11],
        }
    }

    /// Suites executed for this command, in order.
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => SUITES.to_vec(),
            s => vec![s],
        }
    }
}

/// Exit status of a finished run.
pub fn exit_code(body: &Body) -> i32 {
    let precision = body.suites.iter().any(|s| s.error.as_ref().is_some_and(|e| e.kind == ErrorKind::Precision));
    match (precision, body.status) {
        (true, _) => 3,
        (false, Status::Pass) => 0,
        _ => 1,
    }
}

pub fn run_suite(suite: Suite, cfg: &RunConfig) -> SuiteResult {
    let mut checks: Vec<Check> = vec![];
    let mut error = None;
    for &k in suite.criteria() {
        match criteria::run(k, cfg) {
            Ok(c) => checks.extend(c),
            Err(f) => {
                error = Some(SuiteError { kind: f.kind, criterion: k, message: f.message });
                break;
            }
        }
    }
    if suite == Suite::SignedTheta && error.is_none() {
        match criteria::space_tower_checks(cfg) {
            Ok(c) => checks.extend(c),
            Err(f) => error = Some(SuiteError { kind: f.kind, criterion: 10, message: f.message }),
        }
    }
    let status = if error.is_some() {
        Status::Fail
    } else {
        checks.iter().fold(Status::Pass, |s, c| s.combine(c.status))
    };
    SuiteResult { suite: suite.name().to_string(), criteria: suite.criteria().to_vec(), status, checks, error }
}

/// Runs `suite` (expanding `all`), optionally in parallel across suites.
pub fn run(suite: Suite, cfg: &RunConfig, parallel: bool) -> Certificate {
    let start = Instant::now();
    let one = |s: Suite| {
        let t = Instant::now();
        let r = run_suite(s, cfg);
        (r, t.elapsed().as_millis() as u64)
    };
    let parts: Vec<(SuiteResult, u64)> = if parallel {
        suite.expand().into_par_iter().map(one).collect()
    } else {
        suite.expand().into_iter().map(one).collect()
    };
    let status = parts.iter().fold(Status::Pass, |s, (r, _)| s.combine(r.status));
    let suites_ms = parts.iter().map(|(r, ms)| (r.suite.clone(), *ms)).collect();
    let body = Body {
        schema: SCHEMA,
        version: SCHEMA_VERSION,
        command: suite.name().to_string(),
        seed: cfg.seed,
        parameters: cfg.clone(),
        status,
        suites: parts.into_iter().map(|(r, _)| r).collect(),
    };
    let finished_unix_ms = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis() as u64);
    Certificate::new(body, Timing { total_ms: start.elapsed().as_millis() as u64, suites_ms, finished_unix_ms })
}
