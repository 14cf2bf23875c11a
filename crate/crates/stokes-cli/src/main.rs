use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use stokes_cli::{Mode, Overrides};

#[derive(Parser)]
#[command(name = "stokes", version, about = "Stokes multipliers by Borel-Laplace summation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form Stokes data, case tags and 1-sums at the samples.
    Compute(Common),
    /// Run the requested verification tasks.
    Verify(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Scenarios run concurrently (0 uses every core).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long, value_parser = positive)]
    tol_quad: Option<f64>,
    #[arg(long, value_parser = positive)]
    int_tol: Option<f64>,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("expected a positive number, got {s}")),
    }
}

fn main() {
    let cli = Cli::parse();
    let (mode, args) = match cli.command {
        Command::Compute(a) => (Mode::Compute, a),
        Command::Verify(a) => (Mode::Verify, a),
    };
    let overrides = Overrides { tol_quad: args.tol_quad, int_tol: args.int_tol };
    std::process::exit(stokes_cli::run(&args.config, &args.out, mode, args.jobs, overrides));
}
