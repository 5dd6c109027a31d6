//! Scenario-driven sweeps over near-field LoS MIMO links.
//!
//! The `losmimo` binary is a thin wrapper around [`run`]; tests drive the same
//! entry point.

pub mod config;
pub mod csv;
pub mod error;
pub mod scenario;
pub mod sweep;
pub mod validate;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::ScenarioConfig;
use error::CliError;
use sweep::RunOptions;
use validate::Faults;

#[derive(Debug, Parser)]
#[command(name = "losmimo", version, about = "Near-field LoS MIMO spectra and rate sweeps")]
pub struct Cli {
    /// Scenario file (TOML). Defaults to the bundled 16x16 desk example.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output file. Defaults to `output_path` from the scenario, then stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads; 0 lets the pool decide.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Record wall times. Without it the column is zero so output is reproducible byte for byte.
    #[arg(long, global = true)]
    pub timings: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues of the transmit Gram with a concentration summary.
    Spectrum,
    /// Every scheme at every SNR and rotation.
    RateSweep,
    /// Digital rate as every spacing is scaled.
    ApertureSweep,
    /// Rate sweep over a rotation grid, with the Fresnel error of each geometry.
    RotationSweep,
    /// Runs the invariant suite.
    Validate {
        #[arg(long, hide = true, value_parser = ["dt-sign"])]
        inject_fault: Option<String>,
    },
}

fn load(cli: &Cli) -> Result<ScenarioConfig, CliError> {
    Ok(match &cli.config {
        Some(path) => ScenarioConfig::from_path(path)?,
        None => ScenarioConfig::example(),
    })
}

fn emit(text: &str, target: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match target {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Executes a parsed command line, writing results to `--out`, the
/// scenario's `output_path`, or `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    if let Command::Validate { inject_fault } = &cli.command {
        let faults = Faults { dt_sign: inject_fault.is_some() };
        let report = validate::run(faults);
        emit(&report.render(), cli.out.as_ref(), stdout)?;
        return match report.failures() {
            0 => Ok(()),
            n => Err(CliError::Invariant(n)),
        };
    }

    let cfg = load(cli)?;
    let opts = RunOptions { timings: cli.timings };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Io(std::io::Error::other(e)))?;
    let table = pool.install(|| match cli.command {
        Command::Spectrum => sweep::spectrum(&cfg),
        Command::RateSweep => sweep::rate_sweep(&cfg, opts),
        Command::ApertureSweep => sweep::aperture_sweep(&cfg),
        Command::RotationSweep => sweep::rotation_sweep(&cfg, opts),
        Command::Validate { .. } => unreachable!("handled above"),
    })?;
    let target = cli.out.as_ref().or(cfg.output_path.as_ref());
    emit(&table.to_string_lossy(), target, stdout)
}
