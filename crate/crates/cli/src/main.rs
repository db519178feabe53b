mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, ValueEnum};
use qpinem::kinematics::DispersionMode;

use crate::commands::Subcommand;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::OutputSink;

/// Quantum-light PINEM simulator.
#[derive(Parser, Debug)]
#[command(name = "qpinem", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Subcommand, Debug)]
enum Command {
    /// Photon-number amplitudes of each configured light state.
    State(Common),
    /// Electron energy-sideband populations after the interaction.
    Spectrum(Common),
    /// Longitudinal density map over (z, tau).
    Map(Common),
    /// Temporal FWHM of the density peak versus z.
    Fwhm(Common),
    /// Reduced density matrix at one propagation distance.
    Dmatrix(Common),
    /// Self-interference of the electron with a delayed copy.
    Interfere(Common),
    /// Sample coherence Delta_m versus distance.
    Delta(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,

    /// Output directory; overrides `output_dir` in the config.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads; 0 uses all cores.
    #[arg(long, env = "QPINEM_THREADS", default_value_t = 0)]
    threads: usize,

    /// Dispersion relation; overrides `mode` in the config.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Quadratic,
}

impl From<ModeArg> for DispersionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => DispersionMode::Exact,
            ModeArg::Quadratic => DispersionMode::Quadratic,
        }
    }
}

fn split(cmd: Command) -> (Subcommand, Common) {
    match cmd {
        Command::State(c) => (Subcommand::State, c),
        Command::Spectrum(c) => (Subcommand::Spectrum, c),
        Command::Map(c) => (Subcommand::Map, c),
        Command::Fwhm(c) => (Subcommand::Fwhm, c),
        Command::Dmatrix(c) => (Subcommand::Dmatrix, c),
        Command::Interfere(c) => (Subcommand::Interfere, c),
        Command::Delta(c) => (Subcommand::Delta, c),
    }
}

fn execute(sub: Subcommand, common: Common) -> Result<(), CliError> {
    if common.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(common.threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("`--threads`: {e}")))?;
    }
    let mut cfg = RunConfig::load(&common.config)?;
    if let Some(m) = common.mode {
        cfg.mode = m.into();
    }
    let dir = common
        .out
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    // Recorded configuration is independent of where outputs land.
    cfg.output_dir = None;
    let sink = OutputSink::new(dir, sub.name(), &cfg)?;
    commands::run(sub, &cfg, &sink)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (sub, common) = split(cli.command);
    match execute(sub, common) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
