use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use theta_lab::harness::figure::export_figure_data;
use theta_lab::harness::{run_suite, RunOptions, SuiteName};
use theta_lab::DEFAULT_PRIME;

#[derive(Parser)]
#[command(name = "theta-lab", version, about = "Finite-field verification suites for theta maps of hyperelliptic curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write its JSON report.
    Run {
        #[arg(long, value_parser = parse_suite)]
        suite: SuiteName,
        #[arg(long)]
        genus: usize,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Wall-clock budget for every stabilized interpolation.
        #[arg(long)]
        budget_secs: Option<u64>,
        /// Run the suites of `--suite all` on separate threads.
        #[arg(long)]
        parallel: bool,
        /// Record per-check wall-clock times (the report is then not reproducible).
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Export point sets for plotting the rational curve and its secant lines.
    Figure {
        #[arg(long, default_value_t = 3)]
        genus: usize,
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_suite(s: &str) -> Result<SuiteName, String> {
    SuiteName::parse(s).ok_or_else(|| format!("unknown suite {s:?}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { suite, genus, prime, seed, budget_secs, parallel, timing, out } => {
            let opts = RunOptions { budget_secs, parallel, timing };
            let report = match run_suite(suite, genus, prime, seed, opts) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            if let Err(e) = std::fs::write(&out, report.to_json()) {
                eprintln!("error: writing {}: {e}", out.display());
                return ExitCode::from(1);
            }
            print!("{}", report.summary());
            ExitCode::from(report.exit_code() as u8)
        }
        Command::Figure { genus, prime, seed, out } => {
            let data = match export_figure_data(genus, prime, seed) {
                Ok(d) => d,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            if let Err(e) = std::fs::write(&out, data.to_json()) {
                eprintln!("error: writing {}: {e}", out.display());
                return ExitCode::from(1);
            }
            println!("wrote {} ({} gamma samples, {} lines)", out.display(), data.gamma_samples.len(), data.lines.len());
            ExitCode::SUCCESS
        }
    }
}
