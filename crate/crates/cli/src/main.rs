//! `mcpde`: generate, solve, verify, denoise, evaluate and pack datasets.

mod commands;
mod config;
mod error;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::FileConfig;
use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "mcpde", version, about = "Manufactured elliptic PDE datasets and Walk-on-Spheres tooling")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// JSON config file; flags override it and it overrides defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Master seed for generation and walks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Dataset root (default: $MCPDE_OUT, else ./mcpde-data).
    #[arg(long, global = true)]
    pub root: Option<PathBuf>,
    /// Split name, e.g. train or test.
    #[arg(long, global = true)]
    pub split: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw instances and write JSONL records plus ground-truth bundles.
    Generate(commands::GenerateArgs),
    /// Run Walk-on-Spheres on every case and write per-budget bundles.
    Solve(commands::SolveArgs),
    /// Fit log-log MSE slopes over budgets and report them per family.
    Verify(commands::VerifyArgs),
    /// Apply a classical denoiser to one bundle or to a whole split.
    Denoise(commands::DenoiseArgs),
    /// Score predictions (or raw estimates) against ground truth.
    Eval(commands::EvalArgs),
    /// Pack a split (records and case directories) into one archive.
    Pack(commands::PackArgs),
    /// Extract an archive made by `pack`.
    Unpack(commands::UnpackArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = FileConfig::load(cli.global.config.as_deref())?;
    let threads = config::pick(cli.global.threads, file.threads, 0);
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
    }
    let ctx = commands::Context::new(&cli.global, file);
    match cli.cmd {
        Command::Generate(a) => commands::generate(&ctx, a),
        Command::Solve(a) => commands::solve(&ctx, a),
        Command::Verify(a) => commands::verify(&ctx, a),
        Command::Denoise(a) => commands::denoise(&ctx, a),
        Command::Eval(a) => commands::eval(&ctx, a),
        Command::Pack(a) => commands::pack(&ctx, a),
        Command::Unpack(a) => commands::unpack(&ctx, a),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
