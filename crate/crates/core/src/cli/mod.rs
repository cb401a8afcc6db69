//! Command-line front end.

pub mod commands;
pub mod config;
pub mod figures;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::Error;
pub use commands::{cmd_price, cmd_stability, fmt6, CommandOutput};
pub use config::{parse, RunConfig};
pub use figures::{figure_tables, write_figures, Figure};

#[derive(Debug, Parser)]
#[command(name = "discobond", version, about = "Defaultable discrete-coupon bond pricing by explicit finite differences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct Common {
    /// Configuration file (`key = value` lines); defaults apply when absent.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override a variant flag: `mu_r=printed|recomputed` or `eq26=printed|corrected`.
    #[arg(long = "variant", value_name = "KEY=VALUE")]
    pub variants: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve and print `V,r,t,price` rows.
    Price {
        #[command(flatten)]
        common: Common,
        /// Step even when the stability conditions fail.
        #[arg(long)]
        force: bool,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the stability conditions for every interval.
    Stability {
        #[command(flatten)]
        common: Common,
        /// Also write the report as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Write the figure data as CSV files.
    Figures {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        force: bool,
        /// Output directory.
        #[arg(long, default_value = "figures")]
        out: PathBuf,
    },
    /// Print the full configuration in re-parsable form.
    DumpConfig {
        #[command(flatten)]
        common: Common,
    },
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::StabilityViolation { .. } | Error::UnsupportedCorrelation(_) | Error::NoFeasibleDt { .. } | Error::WrongScheme { .. } => 3,
        Error::NonFiniteValue { .. } | Error::QuadratureNonConvergence { .. } | Error::NonPositivePrice(_) => 4,
        _ => 2,
    }
}

fn load(common: &Common) -> Result<RunConfig, Error> {
    let mut cfg = match &common.config {
        Some(p) => parse(&std::fs::read_to_string(p).map_err(|e| Error::Config {
            line: 0,
            message: format!("cannot read {}: {e}", p.display()),
        })?)?,
        None => RunConfig::default(),
    };
    for v in &common.variants {
        cfg.apply_variant(v)?;
    }
    Ok(cfg)
}

fn emit(out: &CommandOutput, path: Option<&PathBuf>) -> Result<(), Error> {
    for n in &out.notes {
        eprintln!("{}", n.trim_end());
    }
    match path {
        Some(p) => std::fs::write(p, &out.text)?,
        None => print!("{}", out.text),
    }
    Ok(())
}

/// Runs a parsed command line and returns the exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Price { common, force, out } => {
            load(&common).and_then(|cfg| cmd_price(&cfg, force)).and_then(|o| emit(&o, out.as_ref()))
        }
        Command::Stability { common, csv } => load(&common).and_then(|cfg| cmd_stability(&cfg)).and_then(|(o, c)| {
            emit(&o, None)?;
            if let Some(p) = csv {
                std::fs::write(p, c)?;
            }
            Ok(())
        }),
        Command::Figures { common, force, out } => load(&common).and_then(|cfg| {
            let mut notes = Vec::new();
            let figs = figure_tables(&cfg, force, &mut notes);
            for n in &notes {
                eprintln!("{n}");
            }
            for p in write_figures(&figs?, &out)? {
                println!("{}", p.display());
            }
            Ok(())
        }),
        Command::DumpConfig { common } => load(&common).map(|cfg| print!("{}", cfg.dump())),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
