//! Command-line front end.
//!
//! Exit codes: 0 success, 2 configuration error, 3 infeasible request,
//! 4 numerical failure. Failures also print a one-line JSON record on stderr.

pub mod commands;
pub mod config;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::error::Error;
use commands::{Report, Table};
use config::{resolve_config_path, Format, RunConfig, CONFIG_DIR_ENV};

#[derive(Debug, Parser)]
#[command(name = "optdesign", version, about = "Optimal designs, error bounds and Monte Carlo certification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Run configuration (JSON). Relative paths fall back to the config directory.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Overrides `mc.seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Overrides `output.format`.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Overrides `output.path`; stdout when neither is set.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Default config directory.
    #[arg(long, global = true, env = CONFIG_DIR_ENV, hide_env_values = true)]
    pub config_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Knots, weights and frequencies.
    Design,
    /// The three-term error bound.
    Bounds,
    /// Smallest (m, l, n) meeting an error budget.
    Solve,
    /// Seeded coverage experiment.
    Simulate,
    /// Lebesgue and Markoff tables.
    Diagnostics,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InfeasibleBudget(_) | Error::InfeasibleGeometry(_) => 3,
        Error::Numerical(_) => 4,
        _ => 2,
    }
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    message: String,
    exit_code: i32,
}

/// Machine-readable error line.
pub fn error_record(e: &Error) -> String {
    let record = ErrorRecord { error: e.kind(), message: e.to_string(), exit_code: exit_code(e) };
    serde_json::to_string(&record).expect("error record serializes")
}

fn render<R: Report>(report: &R, format: Format) -> Result<String, Error> {
    match format {
        Format::Json => serde_json::to_string_pretty(report)
            .map(|s| s + "\n")
            .map_err(|e| Error::Numerical(format!("cannot serialize report: {e}"))),
        Format::Csv => render_csv(&report.table()),
    }
}

fn render_csv(table: &Table) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Config(format!("csv output: {e}"));
    w.write_record(&table.headers).map_err(io)?;
    for row in &table.rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(format!("csv output: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Config(format!("csv output: {e}")))
}

/// Runs a parsed command line and returns the rendered report.
pub fn execute(cli: &Cli) -> Result<(String, Option<PathBuf>), Error> {
    let path = resolve_config_path(cli.config.as_deref(), cli.config_dir.as_deref())?;
    let config = RunConfig::load(&path)?;
    let format = cli.format.unwrap_or(config.output.format);
    let text = match cli.command {
        Command::Design => render(&commands::cmd_design(&config)?, format)?,
        Command::Bounds => render(&commands::cmd_bounds(&config)?, format)?,
        Command::Solve => render(&commands::cmd_solve(&config)?, format)?,
        Command::Simulate => render(&commands::cmd_simulate(&config, cli.seed)?, format)?,
        Command::Diagnostics => render(&commands::cmd_diagnostics(&config)?, format)?,
    };
    let out = cli.out.clone().or_else(|| config.output.path.clone());
    Ok((text, out))
}

fn write_output(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Config(format!("cannot write stdout: {e}"))),
    }
}

/// Full CLI run; returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli).and_then(|(text, out)| write_output(&text, out.as_deref())) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", error_record(&e));
            exit_code(&e)
        }
    }
}
