mod commands;
mod common;
mod table;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use common::Outcome;

#[derive(Parser, Debug)]
#[command(name = "secdist", version, about = "Secure mode distinguishability for linear switching systems")]
struct Cli {
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand, Debug)]
enum Commands {
    /// Decide pairwise distinguishability and write a verdict report
    Analyze(commands::analyze::AnalyzeArgs),

    /// Simulate one mode under a seeded cyclic sparse attack
    Simulate(commands::simulate::SimulateArgs),

    /// Find the modes consistent with a recorded trace
    Estimate(commands::estimate::EstimateArgs),

    /// Build and replay an attack that makes two modes indistinguishable
    Witness(commands::witness::WitnessArgs),

    /// Discretize a continuous-time model
    Discretize(commands::discretize::DiscretizeArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let result = match cli.command {
        Commands::Analyze(args) => commands::analyze::run(args),
        Commands::Simulate(args) => commands::simulate::run(args),
        Commands::Estimate(args) => commands::estimate::run(args),
        Commands::Witness(args) => commands::witness::run(args),
        Commands::Discretize(args) => commands::discretize::run(args),
    };

    match result {
        Ok(Outcome::Positive) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
