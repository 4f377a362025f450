//! Configuration, verification suites and JSON certificates for the `ptower`
//! command-line driver.

pub mod certificate;
pub mod config;
pub mod criteria;
pub mod suites;

pub use certificate::{Certificate, Check, Status};
pub use config::{ConfigError, RunConfig};
pub use suites::{exit_code, run, run_suite, Suite};

/// Environment variable naming the default configuration file.
pub const CONFIG_ENV: &str = "PTOWER_CONFIG";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;
