//! `swaplab`: command-line harness over the swaplab library.
//!
//! Exit codes: 0 on success, 1 when a search finds no collision or `verify`
//! finds a difference, 2 on malformed input.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use crate::commands::Output;

#[derive(Parser, Debug)]
#[command(
    name = "swaplab",
    version,
    about = "Swap-witness experiments on automata and grammars"
)]
struct Cli {
    /// Emit reports as JSON instead of indented text.
    #[arg(long, global = true)]
    json: bool,
    /// Leave the elapsed time out of reports.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Budget for language enumeration and path search.
    #[arg(long, global = true, env = "SWAPLAB_BUDGET")]
    budget: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convert a grammar to Greibach normal form.
    Gnf {
        #[arg(long)]
        grammar: PathBuf,
    },
    /// Compile a grammar to a pushdown machine.
    BuildPda {
        #[arg(long)]
        grammar: PathBuf,
        /// Regroup stack symbols so no move pushes more than two.
        #[arg(long)]
        bound: bool,
    },
    /// Simulate a machine on one input.
    Run {
        #[arg(long, alias = "pda", alias = "dfa")]
        machine: PathBuf,
        #[arg(long)]
        input: String,
        /// Print the configuration at every boundary of the first accepting path.
        #[arg(long)]
        show_stack: bool,
    },
    /// Stack heights along the first accepting path.
    Profile {
        #[arg(long, alias = "machine")]
        pda: PathBuf,
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value_t = ProfileFormat::Csv)]
        format: ProfileFormat,
    },
    /// Pigeonhole swap search over a finite automaton.
    SwapReg(SwapRegArgs),
    /// Index-bucket swap search over a pushdown machine.
    SwapCfl(SwapCflArgs),
    /// Print a fixture sample file (alphabet header, then one member per
    /// line), a fixture grammar (without --n), or `dup` parameters.
    Fixtures {
        #[arg(long)]
        name: String,
        #[arg(long, alias = "n-param")]
        n: Option<usize>,
    },
    /// Print an advice string.
    Advice {
        #[arg(long)]
        name: String,
        #[arg(long)]
        n: usize,
    },
    /// Compare a grammar with a machine on all strings up to a length.
    Verify {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        maxlen: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProfileFormat {
    Csv,
    Text,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("mode").required(true).multiple(false)))]
struct SwapRegArgs {
    #[arg(long, alias = "machine")]
    dfa: PathBuf,
    #[arg(long)]
    samples: PathBuf,
    /// Single cut after this many symbols.
    #[arg(long, group = "mode")]
    cut: Option<usize>,
    /// Comma-separated block lengths.
    #[arg(long, value_delimiter = ',', group = "mode")]
    blocks: Option<Vec<usize>>,
    /// Try every cut `0..=n`.
    #[arg(long, group = "mode")]
    all_cuts: bool,
}

#[derive(Args, Debug)]
struct SwapCflArgs {
    #[arg(long, alias = "machine")]
    pda: PathBuf,
    #[arg(long)]
    samples: PathBuf,
    #[arg(long)]
    j0: usize,
    #[arg(long)]
    k: usize,
    /// Accepting paths examined per member.
    #[arg(long)]
    path_budget: Option<usize>,
    /// Worker threads for the per-member assignment.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// Regroup the machine's stack symbols first if some move pushes more than two.
    #[arg(long)]
    bound: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match commands::dispatch(&cli) {
        Ok((output, code)) => {
            match output {
                Output::Raw(text) => print!("{text}"),
                Output::Report(mut report) => {
                    if !cli.no_timing {
                        report.push("elapsed_ms", started.elapsed().as_millis());
                    }
                    if cli.json {
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&report.to_json())
                                .expect("report serializes")
                        );
                    } else {
                        print!("{}", report.to_text());
                    }
                }
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
