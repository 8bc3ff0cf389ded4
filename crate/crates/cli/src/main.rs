//! `ctqw`: walk sweeps, figure data and the emulated NMR experiment as CSV.

mod commands;
mod config;
mod table;

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use config::{RunConfig, UsageError};
use table::CsvTable;

#[derive(Parser, Debug)]
#[command(
    name = "ctqw",
    version,
    about = "Continuous-time random walks on cycles and their NMR emulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// key = value file; flags override its entries
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Directory for CSV output
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Jump rate for theory sweeps
    #[arg(long, global = true)]
    gamma: Option<f64>,

    /// T2 dephasing in the emulated experiment
    #[arg(long, global = true, value_enum)]
    noise: Option<Switch>,

    /// Grid points per theory curve
    #[arg(long, global = true)]
    points: Option<usize>,

    /// Experiment indices, e.g. 0,3,6
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    n: Option<Vec<i64>>,

    /// Print the verification report as JSON
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Node probabilities of the classical and quantum walk
    Walk,
    /// Distance-to-uniform and entanglement curves with experiment points
    Figures,
    /// Emulated two-spin experiment for each index
    Nmr,
    /// Run the verification suite
    Verify,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Switch {
    On,
    Off,
}

fn config_from(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(g) = cli.gamma {
        cfg.gamma = g;
    }
    if let Some(s) = cli.noise {
        cfg.noise = matches!(s, Switch::On);
    }
    if let Some(p) = cli.points {
        cfg.grid_points = p;
    }
    if let Some(dir) = &cli.out {
        cfg.output_dir = dir.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    match writeln!(out, "{text}").and_then(|_| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn write_tables(dir: &Path, tables: &[(&str, CsvTable)]) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    for (name, table) in tables {
        let path = dir.join(name);
        table.write_file(&path)?;
        emit(&format!("wrote {}", path.display()))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    let cfg = config_from(cli)?;
    match cli.command {
        Command::Walk => write_tables(&cfg.output_dir, &commands::walk(&cfg)?)?,
        Command::Figures => write_tables(&cfg.output_dir, &commands::figures(&cfg)?)?,
        Command::Nmr => {
            let ns = cli
                .n
                .clone()
                .unwrap_or_else(|| (0..=ctqw_core::spin::MAX_WALK_INDEX).collect());
            commands::check_indices(&ns)?;
            write_tables(&cfg.output_dir, &[("nmr.csv", commands::nmr(&cfg, &ns)?)])?;
        }
        Command::Verify => {
            let results = commands::verify(&cfg);
            if cli.json {
                let report: Vec<_> = results
                    .iter()
                    .map(commands::CriterionReport::from)
                    .collect();
                emit(&serde_json::to_string_pretty(&report)?)?;
            } else {
                let lines: Vec<String> = results.iter().map(|c| c.to_string()).collect();
                emit(&lines.join("\n"))?;
            }
            if !results.iter().all(|c| c.passed()) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
