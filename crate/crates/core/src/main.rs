use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use depguard::control::LoopMode;
use depguard::harness::{self, HarnessError};

#[derive(Parser)]
#[command(name = "depguard", about = "Dependability runtime for a simulated gossip sensor network", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one scenario run and write trace + summary
    Run {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        ticks: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run all three modes over a seed list and report the ordering verdict
    Compare {
        #[arg(long)]
        scenario: PathBuf,
        /// Comma-separated seed list, e.g. 1,2,3
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
        #[arg(long)]
        ticks: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Validate a scenario file without running it
    Validate {
        #[arg(long)]
        scenario: PathBuf,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ModeArg {
    NoAdapt,
    Reactive,
    Proactive,
}

impl From<ModeArg> for LoopMode {
    fn from(m: ModeArg) -> LoopMode {
        match m {
            ModeArg::NoAdapt => LoopMode::NoAdaptation,
            ModeArg::Reactive => LoopMode::Reactive,
            ModeArg::Proactive => LoopMode::Proactive,
        }
    }
}

fn exit_code_for(err: &HarnessError) -> ExitCode {
    match err {
        HarnessError::Parse(_) | HarnessError::Validation { .. } => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DEPGUARD_LOG", "error"))
        .init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

fn execute(command: Command) -> Result<(), HarnessError> {
    match command {
        Command::Run {
            scenario,
            seed,
            mode,
            ticks,
            out,
        } => {
            let sc = harness::load_scenario(&scenario)?;
            let report = harness::run(&sc, seed, mode.into(), ticks, Some(&out))?;
            println!(
                "{} seed={} mode={}: availability={:.4} interventions={}",
                report.scenario,
                report.seed,
                report.mode.name(),
                report.metrics.availability,
                report.metrics.manual_interventions
            );
            Ok(())
        }
        Command::Compare {
            scenario,
            seeds,
            ticks,
            out,
        } => {
            let sc = harness::load_scenario(&scenario)?;
            let summary = harness::compare(&sc, &seeds, ticks)?;
            let path = harness::write_comparison(&summary, &out)?;
            for agg in &summary.aggregates {
                println!(
                    "{:<12} mean availability {:.4} (sd {:.4}), mean interventions {:.2}",
                    agg.mode.name(),
                    agg.mean_availability,
                    agg.stddev_availability,
                    agg.mean_interventions
                );
            }
            println!(
                "proactive > reactive: p={:.4} ({})",
                summary.proactive_vs_reactive.p_value,
                if summary.proactive_vs_reactive.significant_at_05 { "significant" } else { "not significant" }
            );
            println!(
                "reactive > no-adapt:  p={:.4} ({})",
                summary.reactive_vs_no_adapt.p_value,
                if summary.reactive_vs_no_adapt.significant_at_05 { "significant" } else { "not significant" }
            );
            println!("ordering holds: {}", summary.ordering_holds);
            println!("written: {}", path.display());
            if summary.errors.is_empty() {
                Ok(())
            } else {
                Err(HarnessError::Precondition(format!(
                    "{} cell(s) failed: {}",
                    summary.errors.len(),
                    summary.errors.join("; ")
                )))
            }
        }
        Command::Validate { scenario } => {
            let sc = harness::load_scenario(&scenario)?;
            println!("{}: valid ({} nodes)", sc.name, sc.nodes.len());
            Ok(())
        }
    }
}
