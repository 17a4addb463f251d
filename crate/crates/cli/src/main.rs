//! Command line front end: order figures, verification suites, the
//! back-and-forth shuttle, and bounded evidence probes.
//!
//! Exit codes: 0 when everything requested passed (probes always count as
//! passing — their records are evidence, not verdicts), 1 when a
//! verification record failed or a run aborted, 2 on usage errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use finaldigits::embedding::BackAndForthState;
use finaldigits::orders::OrderKind;
use finaldigits::render::{render, RenderFormat};
use finaldigits::report::{has_failures, to_jsonl, Status};
use finaldigits::verify::{run_probe, run_suite, ProbeClaim, SuiteName};

#[derive(Parser)]
#[command(name = "finaldigits")]
#[command(about = "Definable digit orders on the naturals: figures, suites, probes")]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Draw the suffix-class tree of an order
    Render {
        /// Order to draw: fd | variant | signed
        #[arg(long, default_value = "fd")]
        order: String,

        /// Tree depth in digits, 1..=12
        #[arg(long, default_value_t = 4)]
        depth: u64,

        /// Output format: text | dot | svg
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Run a verification suite and emit one JSONL record per check
    Verify {
        /// Suite: orders | topology | continuity | embedding | all
        #[arg(long, default_value = "all")]
        suite: String,

        /// Truncation bound for the exhaustive parts
        #[arg(long, default_value_t = 1024)]
        max: u64,

        /// Seed for the sampled parts
        #[arg(long, default_value_t = 1)]
        seed: u64,

        /// Write the records to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Drive the back-and-forth shuttle and print its schedule
    Embed {
        /// Construction steps to run
        #[arg(long, default_value_t = 16)]
        steps: u64,

        /// Print the accumulated order table instead of the step log
        #[arg(long)]
        table: bool,
    },
    /// Gather bounded evidence on an open question; never fails the run
    Probe {
        /// Claim: order-topology-equality | signed-add-continuity |
        /// transported-continuity
        #[arg(long)]
        claim: String,

        /// Resolution/truncation bound
        #[arg(long, default_value_t = 12)]
        bound: u64,

        /// Seed for sampling
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn usage_error(message: &str) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Commands::Render { order, depth, format } => {
            let Some(kind) = OrderKind::from_token(&order) else {
                return usage_error(&format!("unknown order {order:?}: use fd, variant or signed"));
            };
            let Some(format) = RenderFormat::from_token(&format) else {
                return usage_error(&format!("unknown format {format:?}: use text, dot or svg"));
            };
            if !(1..=12).contains(&depth) {
                return usage_error("depth must lie in 1..=12");
            }
            print!("{}", render(kind, depth, format));
            ExitCode::SUCCESS
        }
        Commands::Verify { suite, max, seed, out } => {
            let Some(name) = SuiteName::from_token(&suite) else {
                return usage_error(&format!(
                    "unknown suite {suite:?}: use orders, topology, continuity, embedding or all"
                ));
            };
            let records = run_suite(name, max, seed);
            let jsonl = to_jsonl(&records);
            if let Some(path) = out {
                if let Err(e) = fs::write(&path, &jsonl) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::FAILURE;
                }
            } else {
                print!("{jsonl}");
            }
            let failed = records.iter().filter(|r| r.status == Status::Fail).count();
            eprintln!("{} records, {failed} failed", records.len());
            if has_failures(&records) {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            }
        }
        Commands::Embed { steps, table } => {
            let mut state = BackAndForthState::new();
            if let Err(e) = state.advance_to(steps) {
                eprintln!("error: {e}");
                return ExitCode::FAILURE;
            }
            if table {
                for (n, q) in state.assignments() {
                    println!("{n}\t{q}");
                }
            } else {
                for entry in state.log() {
                    println!(
                        "step {} {}: {} -> {}",
                        entry.step,
                        entry.direction.token(),
                        entry.natural,
                        entry.rational
                    );
                }
            }
            ExitCode::SUCCESS
        }
        Commands::Probe { claim, bound, seed } => {
            let Some(claim) = ProbeClaim::from_token(&claim) else {
                return usage_error(&format!(
                    "unknown claim {claim:?}: use order-topology-equality, \
                     signed-add-continuity or transported-continuity"
                ));
            };
            let records = run_probe(claim, bound, seed);
            print!("{}", to_jsonl(&records));
            eprintln!("{} evidence records", records.len());
            ExitCode::SUCCESS
        }
    }
}
