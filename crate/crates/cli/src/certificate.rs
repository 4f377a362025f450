//! Versioned JSON certificates. The hashed body is deterministic given the
//! configuration and seed; wall-clock data lives outside it.

use crate::config::RunConfig;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "ptower-certificate";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Indeterminate,
}

impl Status {
    pub fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    /// `Fail` dominates `Indeterminate`, which dominates `Pass`.
    pub fn combine(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Indeterminate, _) | (_, Status::Indeterminate) => Status::Indeterminate,
            _ => Status::Pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub criterion: u32,
    pub name: String,
    pub status: Status,
    pub witness: Value,
}

impl Check {
    pub fn new(criterion: u32, name: impl Into<String>, ok: bool, witness: Value) -> Self {
        Self { criterion, name: name.into(), status: Status::of(ok), witness }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorKind {
    /// Precision or truncation budget exhausted.
    Precision,
    Computation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteError {
    pub kind: ErrorKind,
    pub criterion: u32,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub criteria: Vec<u32>,
    pub status: Status,
    pub checks: Vec<Check>,
    pub error: Option<SuiteError>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Body {
    pub schema: &'static str,
    pub version: u32,
    pub command: String,
    pub seed: u64,
    pub parameters: RunConfig,
    pub status: Status,
    pub suites: Vec<SuiteResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub total_ms: u64,
    pub suites_ms: Vec<(String, u64)>,
    pub finished_unix_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub body: Body,
    /// Hex SHA-256 of the compact JSON encoding of `body`.
    pub body_sha256: String,
    pub timing: Timing,
}

impl Body {
    pub fn canonical_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("body serializes")
    }

    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_bytes()))
    }
}

impl Certificate {
    pub fn new(body: Body, timing: Timing) -> Self {
        Self { body_sha256: body.digest(), body, timing }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes") + "\n"
    }
}
