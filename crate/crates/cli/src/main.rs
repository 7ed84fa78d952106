use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use logheat_cli::{execute, Experiment, Invocation};

#[derive(Parser)]
#[command(name = "logheat", version, about = "Simulation and large-deviation experiments for the log-nonlinear heat equation with Poisson noise")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One Galerkin path (controlled when the config control is not 1).
    Simulate(Common),
    /// Skeleton equation for the configured control.
    Skeleton(Common),
    /// Rate-function estimate for the configured target.
    Rate(Common),
    /// Monte Carlo tail probabilities across epsilon.
    Tail(Common),
    /// Distance between controlled paths and the skeleton across epsilon.
    Ldp1(Common),
    /// Moment estimates over an ensemble.
    Moments(Common),
    /// Randomized certification of the analytic inequalities.
    Verify(Common),
}

#[derive(Args)]
struct Common {
    /// TOML run config; defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed root (overrides the config).
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (overrides the config).
    #[arg(long, env = "LOGHEAT_OUT")]
    out: Option<PathBuf>,
    /// Worker threads (overrides the config; 0 = all cores).
    #[arg(long)]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, c) = match cli.command {
        Command::Simulate(c) => (Experiment::Simulate, c),
        Command::Skeleton(c) => (Experiment::Skeleton, c),
        Command::Rate(c) => (Experiment::Rate, c),
        Command::Tail(c) => (Experiment::Tail, c),
        Command::Ldp1(c) => (Experiment::Ldp1, c),
        Command::Moments(c) => (Experiment::Moments, c),
        Command::Verify(c) => (Experiment::Verify, c),
    };
    let inv = Invocation {
        config: c.config,
        seed: c.seed,
        out: c.out,
        workers: c.workers,
    };
    ExitCode::from(execute(experiment, &inv) as u8)
}
