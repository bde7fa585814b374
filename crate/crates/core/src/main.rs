use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qopt::cli::{run, CliError, Command};

/// Phase-space and photon-statistics jobs for Gaussian and cat states.
#[derive(Parser)]
#[command(name = "qopt", version)]
struct Args {
    command: Command,
    /// Job description (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Directory receiving the CSV, metadata and plot files.
    #[arg(long)]
    out_dir: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    verbose: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Some(k) = args.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("{}", CliError::new("cli", "threads", e).to_json());
            return ExitCode::from(2);
        }
    }
    match run(args.command, &args.config, &args.out_dir, args.verbose) {
        Ok(outcome) if outcome.success => ExitCode::SUCCESS,
        Ok(outcome) => {
            eprintln!("{}", serde_json::json!({ "verify": outcome.summary }));
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(2)
        }
    }
}
