//! Command-line front end for data generation and invariant checks.

mod commands;
mod config;
mod output;
mod verify;

use std::process::ExitCode;
use std::time::Instant;

use anyhow::Result;
use clap::{Parser, Subcommand};
use ssh_emitter::Error;

use config::{ConfigError, Overrides, RunConfig};
use output::{Manifest, Writer};

#[derive(Parser)]
#[command(name = "ssh-emitter", version, about = "Quantum emitter coupled to a semi-infinite SSH lattice")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discrete spectrum and region labels over a range of g.
    SpectrumSweep(Overrides),
    /// Survival amplitude and its channel decomposition on a time grid.
    Dynamics(Overrides),
    /// Site-resolved probability on a time grid, long format.
    Heatmap(Overrides),
    /// Sampled winding curves and winding numbers.
    Winding(Overrides),
    /// Invariant suite at the given parameters; exits 3 on any failure.
    Verify(Overrides),
}

/// Raised by `verify` when an invariant fails.
#[derive(Debug)]
struct InvariantFailure;

impl std::fmt::Display for InvariantFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("invariant suite failed")
    }
}

impl std::error::Error for InvariantFailure {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.is::<ConfigError>() {
        return 2;
    }
    if err.is::<InvariantFailure>() {
        return 3;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::InvalidParams(_) | Error::InvalidCells(_) | Error::InvalidGrid(_) | Error::Precondition(_)) => 2,
        Some(
            Error::ReflectionGuard { .. }
            | Error::TailLeak { .. }
            | Error::DegenerateCurve { .. }
            | Error::SingularCoupling
            | Error::BranchPointProximity { .. }
            | Error::IllConditioned(_),
        ) => 4,
        _ => 1,
    }
}

fn run_with_files(
    name: &'static str,
    cfg: &RunConfig,
    started: Instant,
    body: fn(&RunConfig, &mut Writer) -> Result<()>,
) -> Result<()> {
    let mut w = Writer::new(&cfg.out_dir(), cfg.format, Manifest::new(name, cfg), started)?;
    body(cfg, &mut w)?;
    let manifest = w.finish()?;
    eprintln!("wrote {}", manifest.display());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let started = Instant::now();
    match cli.command {
        Command::SpectrumSweep(o) => run_with_files("spectrum-sweep", &o.resolve()?, started, commands::spectrum_sweep),
        Command::Dynamics(o) => run_with_files("dynamics", &o.resolve()?, started, commands::dynamics),
        Command::Heatmap(o) => run_with_files("heatmap", &o.resolve()?, started, commands::heatmap),
        Command::Winding(o) => run_with_files("winding", &o.resolve()?, started, commands::winding),
        Command::Verify(o) => {
            let cfg = o.resolve()?;
            let report = verify::run(&cfg.params);
            verify::print(&report);
            if cfg.out.is_some() {
                let mut w = Writer::new(&cfg.out_dir(), cfg.format, Manifest::new("verify", &cfg), started)?;
                let mut body = serde_json::to_string_pretty(&report)?;
                body.push('\n');
                w.raw("verify.json", body.as_bytes())?;
                w.finish()?;
            }
            if report.passed() {
                Ok(())
            } else {
                Err(InvariantFailure.into())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = exit_code(&e);
            eprintln!("error: {e:#}");
            if let Some(Error::ReflectionGuard { required, .. }) = e.downcast_ref::<Error>() {
                eprintln!("hint: rerun with --cells {required}");
            }
            ExitCode::from(code)
        }
    }
}
