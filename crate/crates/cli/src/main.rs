use std::path::PathBuf;

use clap::Parser;
use hybrid_cli::{main_with, Command, Invocation, Overrides, CONSTANTS_ENV};

/// Couplings, master equations and Gaussian dynamics of hybrid mechanical
/// quantum systems.
///
/// Exit codes: 0 ok, 2 config, 3 precondition, 4 instability, 5 truncation.
#[derive(Parser, Debug)]
#[command(name = "hybrid", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Run configuration (INI-style).
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV output path; the sidecar goes to `<out>.meta`. Defaults to the
    /// config's `[run] out`, else standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long)]
    workers: Option<usize>,
    /// Fock truncation, e.g. `6` or `4x4`.
    #[arg(long)]
    dims: Option<String>,
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let inv = Invocation {
        config: cli.config,
        out: cli.out,
        overrides: Overrides { dims: cli.dims, workers: cli.workers },
        constants: std::env::var(CONSTANTS_ENV).ok(),
    };
    std::process::exit(main_with(cli.command, &inv));
}
