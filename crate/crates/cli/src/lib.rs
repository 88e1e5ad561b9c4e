//! Subcommands of the `pearle` binary. Every command writes one CSV file
//! (UTF-8, LF line endings, header row, nine significant digits) and prints a
//! short summary on standard output.

pub mod caricature;
pub mod commands;
pub mod format;

use std::io::Write;

use anyhow::Result;
use clap::{Parser, Subcommand};

use commands::{AppendixArgs, CaricatureArgs, DensityArgs, SweepArgs};

#[derive(Debug, Parser)]
#[command(
    name = "pearle",
    version,
    about = "Seeded simulation of Pearle's detection-loophole model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Correlation and coincidence rate over a sweep of setting angles.
    Sweep(SweepArgs),
    /// Amplitude densities on a grid, with Riemann bounds on the integral.
    Density(DensityArgs),
    /// Candidate threshold density from the generating function μ.
    Appendix(AppendixArgs),
    /// 2D point cloud and detection-region outlines.
    Caricature(CaricatureArgs),
}

pub fn run<W: Write>(cli: &Cli, mut stdout: W) -> Result<()> {
    match &cli.command {
        Command::Sweep(args) => {
            let r = commands::sweep(args)?;
            write!(stdout, "{}", commands::sweep_summary(&r))?;
        }
        Command::Density(args) => {
            let s = commands::density(args)?;
            write!(stdout, "{}", commands::density_summary(&s))?;
        }
        Command::Appendix(args) => {
            let s = commands::appendix(args)?;
            write!(stdout, "{}", commands::appendix_summary(&s))?;
        }
        Command::Caricature(args) => {
            let undetected = commands::caricature(args)?;
            writeln!(
                stdout,
                "undetected fraction: {}",
                format::num(undetected as f64 / args.points.max(1) as f64)
            )?;
        }
    }
    Ok(())
}
