use clap::{Parser, Subcommand};
use cli::{exit_code, RunConfig, Suite, CONFIG_ENV, EXIT_CONFIG, EXIT_FAIL};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ptower", version, about = "Run verification suites and write JSON certificates")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a suite.
    Run {
        #[arg(value_enum)]
        suite: Suite,
        /// Configuration file (alternative to --config).
        path: Option<PathBuf>,
        #[arg(long, env = CONFIG_ENV)]
        config: Option<PathBuf>,
        /// Overrides `[general] seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Run suites concurrently.
        #[arg(long)]
        parallel: bool,
        /// Certificate path; overrides `[output] path`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let Command::Run { suite, path, config, seed, parallel, out } = Args::parse().command;
    let Some(path) = path.or(config) else {
        eprintln!("error: no configuration given (positional path, --config or {CONFIG_ENV})");
        return ExitCode::from(EXIT_CONFIG as u8);
    };
    let mut cfg = match RunConfig::read(&path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let cert = cli::run(suite, &cfg, parallel);
    for s in &cert.body.suites {
        println!("{:<13} {:?}", s.suite, s.status);
        for c in &s.checks {
            println!("  [{:>2}] {:<13?} {}", c.criterion, c.status, c.name);
        }
        if let Some(e) = &s.error {
            println!("  [{:>2}] {:?} error: {}", e.criterion, e.kind, e.message);
        }
    }
    let target = out.or(cfg.output.clone()).unwrap_or_else(|| PathBuf::from("certificate.json"));
    if let Err(e) = std::fs::write(&target, cert.to_json()) {
        eprintln!("error: cannot write {}: {e}", target.display());
        return ExitCode::from(EXIT_FAIL as u8);
    }
    println!("status {:?}, certificate {} ({} ms)", cert.body.status, target.display(), cert.timing.total_ms);
    ExitCode::from(exit_code(&cert.body) as u8)
}
