use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use quenchlab::{load_config_for, run, ConfigError, Kind, RunError};

/// Local-quench entanglement and scrambling experiments.
#[derive(Debug, Parser)]
#[command(name = "quenchlab", version)]
struct Cli {
    /// fermion_quench, spin_quench, otoc, negativity, eikonal or report
    #[arg(value_parser = parse_kind)]
    kind: Kind,
    /// Experiment config file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Also write plot.svg.
    #[arg(long)]
    plot: bool,
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("quenchlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<String, RunError> {
    let mut cfg = load_config_for(&cli.config, cli.kind)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.output_dir.clone())
        .ok_or_else(|| {
            ConfigError::Missing("output.dir (or pass --out)".into())
        })?;
    let manifest = run(&cfg, &out, cli.plot)?;
    Ok(format!(
        "{}: wrote {} files to {} in {:.2}s",
        manifest.kind,
        manifest.files.len(),
        out.display(),
        manifest.wall_time_seconds
    ))
}
