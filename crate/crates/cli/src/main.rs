use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use infogeom_cli::error::CliError;
use infogeom_cli::{catalog, RunRequest};

#[derive(Parser)]
#[command(name = "infogeom", version, about = "Run information-geometry experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its table.
    Run {
        /// Experiment name; may instead be given as `experiment = ...` in the config.
        experiment: Option<String>,
        /// key = value file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override a parameter; repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// CSV output path; a JSON sidecar is written next to it. Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Significant digits in the CSV.
        #[arg(long, default_value_t = 12)]
        digits: usize,
    },
    /// List experiments and their parameters.
    List,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::List => {
            print!("{}", catalog::render());
            Ok(())
        }
        Command::Run {
            experiment,
            config,
            set,
            out,
            digits,
        } => {
            let config_text = match config {
                Some(p) => Some(std::fs::read_to_string(&p).map_err(|e| {
                    CliError::config(Some("config"), format!("cannot read {}: {e}", p.display()))
                })?),
                None => None,
            };
            let req = RunRequest {
                experiment,
                config_text,
                overrides: set,
                digits,
            };
            let output = infogeom_cli::run(&req)?;
            match out {
                Some(path) => {
                    infogeom_cli::write_outputs(&output, &path)?;
                }
                None => print!("{}", output.csv()),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
