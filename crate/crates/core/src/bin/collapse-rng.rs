use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use collapse_rng::cli::{self, CliError, Outcome};

/// Collapse-based quantum randomness: simulate, certify, verify.
#[derive(Parser)]
#[command(version)]
struct Args {
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the protocol and write stats.csv.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Certify randomness bounds and write cert.csv.
    Certify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check the inequality chains, bound orderings and soundness.
    Verify {
        #[arg(long, default_value_t = 10_000)]
        instances: usize,
        #[arg(long, default_value = "2,3,4")]
        dims: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Bounds against disturbance; writes fig2.csv.
    Figure2 {
        #[arg(long, default_value_t = 0.75)]
        c00: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// KL extremes and the uncertainty baseline; writes fig3.csv.
    Figure3 {
        #[arg(long, default_value_t = 0.62)]
        c: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value_t = cli::DEFAULT_BUDGET)]
        budget: usize,
    },
}

fn run(args: Args) -> Result<Outcome, CliError> {
    let out = args.out.as_path();
    match args.command {
        Command::Simulate { config, seed } => cli::cmd_simulate(&cli::load_config(&config, seed)?, out),
        Command::Certify { config, seed } => cli::cmd_certify(&cli::load_config(&config, seed)?, out),
        Command::Verify { instances, dims, seed } => cli::cmd_verify(instances, &cli::parse_dims(&dims)?, seed, out),
        Command::Figure2 { c00, steps } => cli::cmd_figure2(c00, steps, out),
        Command::Figure3 { c, steps, budget } => cli::cmd_figure3(c, steps, budget, out),
    }
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("COLLAPSE_RNG_THREADS").ok().and_then(|v| v.parse().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { cli::EXIT_USAGE as u8 } else { 0 });
        }
    };
    match run(args) {
        Ok(outcome) => {
            print!("{}", outcome.report);
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
