//! CLI harness: lemma suite, scenario replay, contract fuzzing.
//!
//! Exit codes: 0 = pass, 1 = contract or expectation violation, 2 = usage
//! or parse error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tss_rsrc_model::fuzz::{run_fuzz, FuzzConfig};
use tss_rsrc_model::lemma_suite::{run_suite, suite_passes};
use tss_rsrc_model::scenario::{run_scenario_file, ScenarioError};
use tss_rsrc_model::DEFAULT_BANK_CAPACITY;

#[derive(Parser)]
#[command(
    name = "tss-rsrc-model",
    version,
    about = "Resource-store model checker: exhaustive lemma suite, scenario replay, contract fuzzing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every registered lemma over all heap configurations up to the
    /// size bound; prints "<name> <configs> <counterexamples> <ms>" per
    /// lemma.
    Lemmas {
        /// Heap size bound.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=6))]
        max_nodes: u64,
    },
    /// Replay a scenario file against a fresh store, checking store
    /// invariants after every mutating command.
    Scenario {
        /// Scenario file, one command per line.
        path: PathBuf,
        /// Bank capacity for the store.
        #[arg(long, default_value_t = DEFAULT_BANK_CAPACITY as u64,
              value_parser = clap::value_parser!(u64).range(1..))]
        bank: u64,
    },
    /// Run random lookups with the full contract battery after each call.
    Fuzz {
        /// Number of get_node operations.
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        ops: u64,
        /// RNG seed; a fixed seed reproduces the run exactly.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Bank capacity (the handle alphabet is twice this).
        #[arg(long, default_value_t = DEFAULT_BANK_CAPACITY as u64,
              value_parser = clap::value_parser!(u64).range(1..))]
        bank: u64,
    },
}

fn cmd_lemmas(max_nodes: usize) -> ExitCode {
    match run_suite(max_nodes) {
        Ok(reports) => {
            for report in &reports {
                println!(
                    "{} {} {} {}",
                    report.lemma_name, report.configs_checked, report.violations, report.elapsed_ms
                );
            }
            if suite_passes(&reports) {
                ExitCode::SUCCESS
            } else {
                for report in reports.iter().filter(|r| !r.passed()) {
                    for ce in &report.counterexamples {
                        eprintln!("{}: heap {:?}: {}", report.lemma_name, ce.heap, ce.binding);
                    }
                }
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn cmd_scenario(path: &PathBuf, bank: usize) -> ExitCode {
    match run_scenario_file(path, bank) {
        Ok(transcript) => {
            for line in transcript {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err(ScenarioError::Failed(failure)) => {
            for line in &failure.transcript {
                println!("{line}");
            }
            eprintln!("failure: {failure}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn cmd_fuzz(ops: u64, seed: u64, bank: usize) -> ExitCode {
    match run_fuzz(&FuzzConfig::new(ops, seed, bank)) {
        Ok(report) => {
            println!("ops {}", report.ops);
            println!("list_len {}", report.final_list_len);
            println!("allocated {}", report.allocated);
            println!("code 616 {}", report.histogram.found);
            println!("code 833 {}", report.histogram.memory);
            println!("code 900 {}", report.histogram.marshal_fail);
            println!("code 1611 {}", report.histogram.created);
            ExitCode::SUCCESS
        }
        Err(violation) => {
            eprintln!("violation: {violation}");
            ExitCode::from(1)
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Lemmas { max_nodes } => cmd_lemmas(max_nodes as usize),
        Command::Scenario { path, bank } => cmd_scenario(&path, bank as usize),
        Command::Fuzz { ops, seed, bank } => cmd_fuzz(ops, seed, bank as usize),
    }
}
