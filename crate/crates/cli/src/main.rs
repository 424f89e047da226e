use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fracoga_cli::config::{ExperimentConfig, OutputFormat, SweepConfig};
use fracoga_cli::experiment::{run_experiment, run_sweep};
use fracoga_cli::verify::{self, Hooks};
use fracoga_cli::{exit, CliError};

/// Orthogonal greedy solver for the 1D fractional Laplacian.
#[derive(Parser)]
#[command(name = "fracoga", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one configuration and write its convergence table.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output_path` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides `output_format` (csv or md).
        #[arg(long)]
        format: Option<OutputFormat>,
    },
    /// Solve the cartesian product of alphas, powers and grids.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Run cells one at a time.
        #[arg(long)]
        sequential: bool,
    },
    /// Run the built-in verification checks.
    Verify {
        /// Run a single check by name.
        #[arg(long)]
        only: Option<String>,
        /// List check names and exit.
        #[arg(long)]
        list: bool,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Run {
            config,
            out,
            format,
        } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(out) = out {
                cfg.output_path = out;
            }
            if let Some(format) = format {
                cfg.output_format = format;
            }
            let done = run_experiment(&cfg)?;
            println!("wrote {} ({} rows)", done.table.display(), done.rows.len());
            Ok(exit::SUCCESS)
        }
        Command::Sweep {
            config,
            out_dir,
            sequential,
        } => {
            let sweep = SweepConfig::load(&config)?;
            let cells = run_sweep(&sweep, &out_dir, sequential)?;
            println!("wrote {} tables to {}", cells.len(), out_dir.display());
            Ok(exit::SUCCESS)
        }
        Command::Verify { only, list } => {
            let checks = verify::checks();
            if list {
                for c in &checks {
                    println!("{:<28} {}", c.name, c.summary);
                }
                return Ok(exit::SUCCESS);
            }
            let selected: Vec<_> = match &only {
                Some(name) => checks.iter().filter(|c| c.name == name).collect(),
                None => checks.iter().collect(),
            };
            if selected.is_empty() {
                return Err(CliError::field(
                    "only",
                    format!("no check named `{}`", only.unwrap_or_default()),
                ));
            }
            let hooks = Hooks::default();
            let mut failed = 0;
            for c in selected {
                let r = verify::run_check(c, &hooks);
                println!("{}", r.line());
                failed += usize::from(!r.outcome.passed);
            }
            if failed > 0 {
                eprintln!("{failed} check(s) failed");
                Ok(exit::VERIFICATION)
            } else {
                Ok(exit::SUCCESS)
            }
        }
    }
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
