//! Benchmark harness for the `saddlefw` solvers: TOML experiment configs,
//! named presets, CSV convergence traces, JSON run summaries and trace
//! comparisons. The `saddlefw` binary is a thin CLI over this crate.

pub mod compare;
pub mod config;
pub mod error;
pub mod presets;
pub mod runner;
pub mod stats;
pub mod summary;
pub mod trace;

pub use config::{ExperimentConfig, CONFIG_FORMAT_VERSION, OUTPUT_DIR_ENV};
pub use error::{HarnessError, Result};
pub use summary::{write_outputs, Outputs, Summary};
pub use trace::{TraceRow, TRACE_HEADER};

use std::path::Path;

/// Loads, validates and runs a config file, writing outputs to the resolved directory.
pub fn run_config_file(path: &Path) -> Result<(Outputs, Summary)> {
    let cfg = ExperimentConfig::load(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let exp = runner::execute(&cfg, base)?;
    let out = write_outputs(&cfg, &exp, &cfg.output_dir(base))?;
    Ok((out, Summary::new(&cfg, &exp)))
}
