//! Batch front end: JSON experiment configs in, CSV or JSON tables out.
//!
//! Exit codes: 0 on success, 2 for configuration and I/O problems, 3 when a
//! numerical precondition fails or a `check` reports a failure.

mod check;
mod config;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use check::{check, write_check, CheckReport, CheckResult, BOUND_TOLERANCE};
pub use config::{
    AmplitudeRange, ExperimentConfig, GridConfig, OutputConfig, OutputFormat, ScanAxis, ScanConfig,
    ScanPoint, StateConfig, MAX_SCAN_POINTS,
};
pub use table::{
    amplitude_table, compute_row, format_float, run, write_amplitudes, write_run, AmplitudeRow,
    ResultRow, AMPLITUDE_COLUMNS, RUN_COLUMNS, SCHEMA_VERSION,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error(transparent)]
    Numeric(#[from] crate::Error),
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Io(_) => 2,
            Self::Numeric(_) | Self::ChecksFailed(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "scatent",
    version,
    about = "Entanglement generated by 1D two-body scattering"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute purities for the configured point or scan.
    Run(CommonArgs),
    /// Run the invariant suite at the configured point.
    Check(CommonArgs),
    /// Tabulate t(q) and r(q) for the configured potential.
    Amplitudes(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Experiment config (JSON). Defaults apply when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file; overrides the config. Standard output if neither is set.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Points per momentum axis.
    #[arg(long)]
    pub grid_n: Option<usize>,
    /// Grid half-width in standard deviations.
    #[arg(long)]
    pub window: Option<f64>,
}

impl CommonArgs {
    fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(n) = self.grid_n {
            cfg.grid.n = n;
        }
        if let Some(w) = self.window {
            cfg.grid.window = w;
        }
        if let Some(f) = self.format {
            cfg.output.format = f;
        }
        if let Some(p) = &self.out {
            cfg.output.path = Some(p.clone());
        }
        Ok(cfg)
    }
}

fn with_output(
    cfg: &ExperimentConfig,
    body: impl FnOnce(&mut dyn Write) -> Result<(), CliError>,
) -> Result<(), CliError> {
    match &cfg.output.path {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush().map_err(|e| CliError::Io(e.to_string()))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock)
        }
    }
}

/// Execute a parsed command.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Run(args) => {
            let cfg = args.resolve()?;
            let rows = run(&cfg)?;
            with_output(&cfg, |w| write_run(w, &rows, cfg.output.format))
        }
        Command::Check(args) => {
            let cfg = args.resolve()?;
            let report = check(&cfg)?;
            with_output(&cfg, |w| write_check(w, &report, cfg.output.format))?;
            match report.checks.iter().filter(|c| !c.passed).count() {
                0 => Ok(()),
                n => Err(CliError::ChecksFailed(n)),
            }
        }
        Command::Amplitudes(args) => {
            let cfg = args.resolve()?;
            let rows = amplitude_table(&cfg)?;
            with_output(&cfg, |w| write_amplitudes(w, &rows, cfg.output.format))
        }
    }
}

/// Parse `args`, execute, and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
