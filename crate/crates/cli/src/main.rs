use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use relalg_cli::{bundle, ck, eval, star, trace, verify, write_reports, CliError};

/// Batch workbench for finite relation algebra: symbolic closure traces,
/// seeded verification sweeps, knowledge queries, star-relation analysis.
#[derive(Parser)]
#[command(name = "relalg", version, about)]
struct Cli {
    /// Write the text report to <PREFIX>.txt and the JSON report to <PREFIX>.json
    #[arg(long, global = true, value_name = "PREFIX")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Staged symbolic closure of the generator union, one stage per line
    Trace {
        /// Abort if no fixpoint is reached within this many stages
        #[arg(long, default_value_t = 64)]
        max_stages: usize,
    },
    /// Drive seeded random equivalence relations through every check
    Verify {
        /// Largest carrier size; each instance draws |X| from 1..=SIZE
        #[arg(long)]
        size: usize,
        /// Number of random instances
        #[arg(long)]
        count: usize,
        /// Seed for the instance stream (required for reproducibility)
        #[arg(long)]
        seed: u64,
        /// Also containment-check every normalization deletion per instance
        #[arg(long)]
        audit: bool,
    },
    /// Knowledge and common-knowledge events for a partition model file
    Ck {
        /// Model file: {"states": [...], "agents": [...], "partitions": {...}}
        #[arg(long)]
        input: PathBuf,
        /// Event as a JSON list of state ids, or @FILE containing one; repeatable
        #[arg(long = "event", value_name = "JSON|@FILE")]
        events: Vec<String>,
    },
    /// Cover analysis of the star relation on N points
    Star {
        #[arg(long)]
        n: usize,
    },
    /// Evaluate a composition expression on a bundle file
    Eval {
        /// Expression over D P Q E G G' H, words joined by +
        expr: String,
        /// Bundle file as produced by `bundle --output`
        #[arg(long)]
        input: PathBuf,
    },
    /// Build a construction bundle and emit it as JSON
    Bundle {
        /// Carrier size for a seeded random equivalence relation
        #[arg(long)]
        size: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relation file supplying E instead of a random one
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

fn run(cli: &Cli) -> Result<relalg_cli::CommandOutput, CliError> {
    match &cli.command {
        Command::Trace { max_stages } => trace(*max_stages),
        Command::Verify { size, count, seed, audit } => verify(*size, *count, *seed, *audit),
        Command::Ck { input, events } => ck(input, events),
        Command::Star { n } => star(*n),
        Command::Eval { expr, input } => eval(expr, input),
        Command::Bundle { size, seed, input } => bundle(*size, *seed, input.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if let Some(prefix) = &cli.output {
                if let Err(e) = write_reports(prefix, &out) {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
