//! Batch front end for `hybrid-core`: reads a run configuration, executes one
//! command and writes a CSV table plus a JSON `.meta` sidecar.
//!
//! Exit codes: 0 success, 2 configuration or usage error, 3 physics
//! precondition failure, 4 instability (no steady state, integrator
//! breakdown), 5 Fock-truncation failure.

pub mod commands;
pub mod config;
pub mod error;
pub mod model;
pub mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::ValueEnum;
use hybrid_core::constants::{check_version, VERSION};
use hybrid_core::scenarios::constants_used;
use serde_json::{json, Value as Json};

pub use commands::{Overrides, Report};
pub use config::Config;
pub use error::CliError;

/// Environment variable that selects the constants table.
pub const CONSTANTS_ENV: &str = "HYBRID_CONSTANTS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Parameters and derived couplings of a scenario.
    Couplings,
    /// Coupling ranges per mechanism.
    Table,
    /// Time evolution (master equation, exact propagation or Gaussian moments).
    Evolve,
    /// Gaussian steady state from the Lyapunov equation.
    Steady,
    /// Force-noise spectrum acting on the mechanics.
    Spectrum,
    /// Parameter sweep over a scenario.
    Sweep,
}

impl Command {
    pub const ALL: [Command; 6] =
        [Command::Couplings, Command::Table, Command::Evolve, Command::Steady, Command::Spectrum, Command::Sweep];

    pub fn name(self) -> &'static str {
        match self {
            Command::Couplings => "couplings",
            Command::Table => "table",
            Command::Evolve => "evolve",
            Command::Steady => "steady",
            Command::Spectrum => "spectrum",
            Command::Sweep => "sweep",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

/// Everything the command line supplies.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Invocation {
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub overrides: Overrides,
    /// Value of [`CONSTANTS_ENV`], if set.
    pub constants: Option<String>,
}

/// Result of a successful run.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub csv: String,
    pub meta: Json,
    /// Where the CSV should go; `None` means standard output.
    pub out: Option<PathBuf>,
}

/// Sidecar path for a CSV output: `<out>.meta`.
pub fn meta_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

fn load_config(path: &Path) -> Result<Config, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    Config::parse(&text)
}

/// Parses the configuration and runs the command, without touching the
/// output files.
pub fn execute(command: Command, inv: &Invocation) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let constants = inv.constants.clone().unwrap_or_else(|| VERSION.to_string());
    if !check_version(&constants) {
        return Err(CliError::usage(format!(
            "unsupported constants table `{constants}` in {CONSTANTS_ENV}; available: {VERSION}"
        )));
    }
    let cfg = match &inv.config {
        Some(p) => Some(load_config(p)?),
        None if command == Command::Table => None,
        None => return Err(CliError::usage(format!("`{}` needs --config <path>", command.name()))),
    };
    let base_dir = inv
        .config
        .as_deref()
        .and_then(Path::parent)
        .map(Path::to_path_buf)
        .unwrap_or_default();
    let out = match (&inv.out, cfg.as_ref().and_then(|c| c.section("run")).and_then(|r| r.entry("out"))) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(e)) => Some(base_dir.join(&e.raw)),
        (None, None) => None,
    };
    let report = commands::run(command, cfg.as_ref(), &base_dir, &inv.overrides)?;
    let csv = report.table.to_csv();
    let meta = json!({
        "tool": "hybrid",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command.name(),
        "config_path": inv.config.as_ref().map(|p| p.display().to_string()),
        "config_text": cfg.as_ref().map(|c| c.text.clone()),
        "overrides": { "dims": inv.overrides.dims, "workers": inv.overrides.workers },
        "source": report.source,
        "inputs": report.resolved,
        "run": report.details,
        "constants_version": constants,
        "constants": constants_used(),
        "columns": report.table.header,
        "rows": report.table.rows.len(),
        "output": out.as_ref().map(|p| p.display().to_string()),
        "wall_time_s": started.elapsed().as_secs_f64(),
    });
    Ok(Outcome { csv, meta, out })
}

/// Writes the CSV (or prints it) and the sidecar.
pub fn write_outcome(o: &Outcome) -> Result<(), CliError> {
    match &o.out {
        Some(path) => {
            std::fs::write(path, &o.csv)
                .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
            let meta = serde_json::to_string_pretty(&o.meta).expect("metadata serialises") + "\n";
            std::fs::write(meta_path(path), meta)
                .map_err(|e| CliError::usage(format!("cannot write metadata for {}: {e}", path.display())))?;
        }
        None => print!("{}", o.csv),
    }
    Ok(())
}

/// Full command-line entry point; returns the process exit code.
pub fn main_with(command: Command, inv: &Invocation) -> i32 {
    match execute(command, inv).and_then(|o| write_outcome(&o)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("hybrid {}: {e}", command.name());
            e.exit_code()
        }
    }
}
