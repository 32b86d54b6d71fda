//! Batch runner: config files in, deterministic CSV/JSON/SVG out.

pub mod config;
pub mod experiment;
pub mod output;
pub mod seed;

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

pub use config::{load_config, load_config_for, parse_config, ConfigError, ExperimentConfig, Kind};

pub const SERIES_FILE: &str = "series.csv";
pub const REPORT_FILE: &str = "report.json";
pub const PLOT_FILE: &str = "plot.svg";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("{kind} run failed: {source}")]
    Numerical {
        kind: Kind,
        #[source]
        source: quenchlab_core::Error,
    },
    #[error("cannot write outputs to {dir}: {reason}")]
    Io { dir: PathBuf, reason: String },
}

impl RunError {
    /// 2 for config problems, 3 for numerical failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numerical { .. } => 3,
            RunError::Io { .. } => 1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub kind: Kind,
    pub seed: u64,
    pub files: Vec<PathBuf>,
    pub wall_time_seconds: f64,
}

/// Runs `cfg` and writes its artifacts into `out_dir`.
///
/// Nothing is written until every computation has succeeded; `series.csv` and
/// `report.json` depend only on the config and seed.
pub fn run(cfg: &ExperimentConfig, out_dir: &Path, plot: bool) -> Result<RunManifest, RunError> {
    let started = Instant::now();
    let outcome = experiment::execute(cfg).map_err(|source| RunError::Numerical {
        kind: cfg.kind,
        source,
    })?;

    let mut files: Vec<(&str, String)> = vec![
        (SERIES_FILE, output::series_csv(&outcome.series)),
        (
            REPORT_FILE,
            output::canonical_json(&json!({
                "kind": cfg.kind,
                "seed": cfg.seed,
                "report": outcome.report,
            })),
        ),
    ];
    if plot || cfg.plot {
        files.push((PLOT_FILE, output::series_svg(cfg.kind.as_str(), &outcome.series)));
    }
    let wall = started.elapsed().as_secs_f64();
    let mut names: Vec<&str> = files.iter().map(|(n, _)| *n).collect();
    names.push(MANIFEST_FILE);
    let manifest = json!({
        "kind": cfg.kind,
        "seed": cfg.seed,
        "config": cfg.echo,
        "time_grid": cfg.time,
        "versions": {
            "quenchlab": env!("CARGO_PKG_VERSION"),
            "quenchlab-core": quenchlab_core::VERSION,
        },
        "files": names,
        "wall_time_seconds": wall,
    });
    files.push((MANIFEST_FILE, output::canonical_json(&manifest)));

    let written = output::write_all(out_dir, &files).map_err(|e| RunError::Io {
        dir: out_dir.to_path_buf(),
        reason: e.to_string(),
    })?;
    Ok(RunManifest {
        kind: cfg.kind,
        seed: cfg.seed,
        files: written,
        wall_time_seconds: wall,
    })
}
