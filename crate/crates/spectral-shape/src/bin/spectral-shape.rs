//! Thin command-line wrapper: `spectral-shape --config run.json [--out DIR]
//! [--refine N] [--seed S]`. The command itself is selected inside the config
//! file; see the crate documentation for the schema and emitted artifacts.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 configuration error.
//! `RUST_LOG` controls verbosity (e.g. `RUST_LOG=info`).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

#[derive(Parser)]
#[command(version, about = "Shape calculus of Dirichlet eigenvalues on star-shaped planar domains")]
struct Args {
    /// JSON run configuration (strict schema; selects the command).
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides `out` in the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Mesh refinement override.
    #[arg(long)]
    refine: Option<u32>,
    /// Eigensolver seed override.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    env_logger::init();
    let args = Args::parse();
    match spectral_shape::cli::run(
        &args.config,
        args.out.as_deref(),
        args.refine,
        args.seed,
    ) {
        Ok(out_dir) => {
            println!("wrote {}", out_dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
