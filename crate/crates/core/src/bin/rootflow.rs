use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use rootflow::cli::{exit_code, run, ExperimentConfig, Mode, Overrides, EXIT_CONFIG};

/// Zeroes of repeatedly differentiated random polynomials.
#[derive(Parser, Debug)]
#[command(name = "rootflow", version)]
struct Args {
    /// simulate | theory | compare | real | pde-check | fractional
    mode: String,
    /// JSON config, or a manifest.json from an earlier run.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated times.
    #[arg(long, value_delimiter = ',')]
    t: Option<Vec<f64>>,
    /// Comma-separated derivative orders for `fractional`.
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    let Some(mode) = Mode::parse(&args.mode) else {
        eprintln!("rootflow: unknown mode {:?}", args.mode);
        return ExitCode::from(EXIT_CONFIG as u8);
    };
    let mut cfg = match &args.config {
        Some(p) => match ExperimentConfig::load(p) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("rootflow: {e}");
                return ExitCode::from(EXIT_CONFIG as u8);
            }
        },
        None => ExperimentConfig::default(),
    };
    cfg.apply(Overrides {
        mode: Some(mode),
        n: args.n,
        t: args.t,
        alpha: args.alpha,
        seed: args.seed,
        bins: args.bins,
        out: args.out,
    });
    match run(cfg) {
        Ok(o) => {
            for note in &o.manifest.notes {
                eprintln!("rootflow: {note}");
            }
            println!("wrote {} artifacts to {}", o.manifest.artifacts.len() + 1, o.manifest.config.out.display());
            ExitCode::from(o.exit_code as u8)
        }
        Err(e) => {
            eprintln!("rootflow: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
