use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use loceret::CommandOutput;
use loceret_core::storagesim::Execution;
use loceret_core::SearchMode;

/// Locally recoverable codes with local error detection.
#[derive(Parser)]
#[command(name = "loceret", version)]
struct Cli {
    /// Write the JSON report to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance, t-localities, dual weights and bound checks.
    Analyze {
        descriptor: PathBuf,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[command(flatten)]
        search: Search,
    },
    /// Recovery plan for one coordinate.
    Plan {
        descriptor: PathBuf,
        #[arg(long)]
        target: usize,
        #[arg(long, default_value_t = 1)]
        t: usize,
        /// Comma-separated helper coordinates.
        #[arg(long, value_delimiter = ',')]
        helpers: Option<Vec<usize>>,
    },
    /// Repair the `?` in a word file with detection.
    Repair {
        descriptor: PathBuf,
        #[arg(long)]
        word: PathBuf,
        /// Defaults to the erased position of a full-length word.
        #[arg(long)]
        target: Option<usize>,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long, value_delimiter = ',')]
        helpers: Option<Vec<usize>>,
    },
    /// Fault-injection simulation from a config file.
    Simulate {
        config: PathBuf,
        /// Write the sweep table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config detection capacity.
        #[arg(long)]
        t: Option<usize>,
        /// Run trials on one thread.
        #[arg(long)]
        serial: bool,
    },
    /// Rebuild the [12, 6] code over F13 and check the worked example.
    PaperExample,
}

#[derive(Args)]
#[group(multiple = false)]
struct Search {
    /// Exhaustive recovery-set search (default; n <= 20).
    #[arg(long)]
    exhaustive: bool,
    /// Greedy recovery-set search, giving upper bounds.
    #[arg(long)]
    greedy: bool,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: Cli) -> Result<bool> {
    let output: CommandOutput = match cli.command {
        Command::Analyze { descriptor, t, search } => {
            let mode = if search.greedy { SearchMode::Greedy } else { SearchMode::Exhaustive };
            loceret::analyze(&read(&descriptor)?, t, mode)?
        }
        Command::Plan { descriptor, target, t, helpers } => {
            loceret::plan(&read(&descriptor)?, target, t, helpers.as_deref())?
        }
        Command::Repair { descriptor, word, target, t, helpers } => {
            loceret::repair(&read(&descriptor)?, &read(&word)?, target, t, helpers.as_deref())?
        }
        Command::Simulate { config, csv, seed, t, serial } => {
            let exec = if serial { Execution::Serial } else { Execution::Parallel };
            let sim = loceret::simulate(&read(&config)?, seed, t, exec)?;
            if let Some(path) = csv {
                write(&path, &sim.csv)?;
            }
            sim.output
        }
        Command::PaperExample => loceret::paper_example(),
    };
    print!("{}", output.summary);
    if let Some(path) = cli.out {
        write(&path, &loceret::emit_report(&output.report))?;
    }
    Ok(output.ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
