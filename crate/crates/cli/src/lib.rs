//! Experiment driver behind the `rgg` binary.
//!
//! Every run writes a CSV (or JSON) whose first line records the tool
//! version, the full argument set and the seed. Re-running with those
//! arguments reproduces the file byte for byte at any thread count.

pub mod args;
pub mod commands;
pub mod config;
pub mod selftest;

use std::ffi::OsString;
use std::hash::{BuildHasher, Hasher};
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Value};

use crate::args::{Cli, Format};

/// Exit statuses.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or configuration.
    Usage(String),
    /// Rejected parameter values.
    Invalid(String),
    /// A cross-check or invariant failed.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Invalid(_) => EXIT_INVALID,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Invalid(m) => write!(f, "{m}"),
            CliError::Internal(m) => write!(f, "internal check failed: {m}"),
        }
    }
}

impl From<rgg_core::Error> for CliError {
    fn from(e: rgg_core::Error) -> Self {
        if e.is_consistency() {
            CliError::Internal(e.to_string())
        } else {
            CliError::Invalid(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Invalid(format!("i/o error: {e}"))
    }
}

/// What a command produced.
#[derive(Debug, Default)]
pub struct Report {
    /// CSV body, header row first, without the leading comment.
    pub csv: String,
    pub json: Value,
    pub summary: String,
    /// Raw bytes for `--format binary`.
    pub binary: Option<Vec<u8>>,
    /// Set when the output was written but an invariant failed.
    pub failure: Option<String>,
}

/// Context shared by all commands.
#[derive(Clone, Copy, Debug)]
pub struct RunContext {
    pub seed: u64,
}

fn random_seed() -> u64 {
    let mut h = std::collections::hash_map::RandomState::new().build_hasher();
    h.write_u64(std::process::id() as u64);
    if let Ok(t) = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH) {
        h.write_u128(t.as_nanos());
    }
    h.finish()
}

/// Parses `argv` (program name first) and runs the command. Returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match config::find_config_flag(&argv) {
        Some(path) => match config::load_config(path.as_ref()) {
            Ok(cfg) => config::merge_config(argv, &cfg),
            Err(e) => {
                eprintln!("rgg: {e}");
                return e.exit_code();
            }
        },
        None => argv,
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INVALID,
            };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("rgg {}: {e}", cli.command.name());
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let seed = cli.seed.unwrap_or_else(random_seed);
    let ctx = RunContext { seed };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Invalid(format!("cannot start {} threads: {e}", cli.threads)))?;
    if cli.format == Format::Binary && !matches!(cli.command, args::Command::Sample(_)) {
        return Err(CliError::Usage("--format binary applies only to `sample`".into()));
    }
    let report = pool.install(|| commands::dispatch(&cli.command, &ctx))?;

    let name = cli.command.name();
    let args = serde_json::to_value(&cli.command).unwrap_or(Value::Null);
    let pairs = config::config_pairs(&args);
    let bytes = match cli.format {
        Format::Csv => {
            let mut s = config::header_line(name, &pairs, seed);
            s.push('\n');
            s.push_str(&report.csv);
            s.into_bytes()
        }
        Format::Json => {
            let config = config::command_args(&args);
            let doc = json!({
                "tool": "rgg",
                "version": env!("CARGO_PKG_VERSION"),
                "command": name,
                "config": config,
                "seed": seed,
                "result": report.json,
            });
            let mut s = serde_json::to_string_pretty(&doc)
                .map_err(|e| CliError::Internal(format!("json encoding: {e}")))?;
            s.push('\n');
            s.into_bytes()
        }
        Format::Binary => report
            .binary
            .clone()
            .ok_or_else(|| CliError::Usage("this command has no binary output".into()))?,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, &bytes)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)?;
            out.flush()?;
        }
    }
    eprintln!("rgg {name}: {} (seed={seed})", report.summary);
    match report.failure {
        Some(msg) => Err(CliError::Internal(msg)),
        None => Ok(EXIT_OK),
    }
}
