use std::path::{Path, PathBuf};

use saddlefw::GapReport64;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ScheduleSpec, SigmaSpec, CONFIG_FORMAT_VERSION};
use crate::error::{HarnessError, Result};
use crate::runner::{AlgorithmRun, Experiment};
use crate::trace::{rows_for, write_trace};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Platform {
    pub os: String,
    pub arch: String,
    pub family: String,
}

impl Platform {
    pub fn current() -> Self {
        Self {
            os: std::env::consts::OS.to_string(),
            arch: std::env::consts::ARCH.to_string(),
            family: std::env::consts::FAMILY.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSummary {
    pub kind: String,
    pub dim_x: usize,
    pub dim_y: usize,
    pub regime: String,
    pub l_xx: f64,
    pub l_yx: f64,
    pub l_yy: f64,
    pub mu_tilde: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapSummary {
    pub k: usize,
    pub gap_x: f64,
    pub gap_y: f64,
    pub gap_z: f64,
    pub dual_mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
}

impl GapSummary {
    fn new(k: usize, g: &GapReport64) -> Self {
        Self {
            k,
            gap_x: g.gap_x,
            gap_y: g.gap_y,
            gap_z: g.gap_z,
            dual_mode: g.mode.as_str().to_string(),
            sigma: g.sigma,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub algorithm: String,
    pub iterations_completed: usize,
    pub stopped_early: bool,
    /// Best iterate over the second half of the run; absent when none was evaluated.
    pub best_index: Option<usize>,
    pub best_gap: Option<GapSummary>,
    pub final_gap: Option<GapSummary>,
    pub final_infeasibility: Option<f64>,
    pub wall_seconds: f64,
    pub mu: ScheduleSpec,
    pub tau: ScheduleSpec,
    pub sigma: SigmaSpec,
}

impl RunSummary {
    fn new(run: &AlgorithmRun) -> Self {
        let r = &run.result;
        let best_gap = r
            .best_index
            .and_then(|t| r.record(t))
            .and_then(|rec| rec.gap.as_ref().map(|g| GapSummary::new(rec.k, g)));
        let last = r.last_evaluated();
        Self {
            algorithm: run.algorithm.name().to_string(),
            iterations_completed: r.iterations_completed,
            stopped_early: r.stopped_early,
            best_index: r.best_index,
            best_gap,
            final_gap: last.and_then(|rec| rec.gap.as_ref().map(|g| GapSummary::new(rec.k, g))),
            final_infeasibility: last.and_then(|rec| rec.infeasibility),
            wall_seconds: run.wall_seconds,
            mu: ScheduleSpec::from_schedule(r.config.mu),
            tau: ScheduleSpec::from_schedule(r.config.tau),
            sigma: SigmaSpec::from_dual_step(r.config.sigma),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub config_format_version: u32,
    pub library_version: String,
    pub platform: Platform,
    pub config: ExperimentConfig,
    pub problem: ProblemSummary,
    pub runs: Vec<RunSummary>,
}

impl Summary {
    pub fn new(cfg: &ExperimentConfig, exp: &Experiment) -> Self {
        let s = exp.problem.smoothness();
        Self {
            config_format_version: CONFIG_FORMAT_VERSION,
            library_version: saddlefw::VERSION.to_string(),
            platform: Platform::current(),
            config: cfg.clone(),
            problem: ProblemSummary {
                kind: exp.problem.kind.to_string(),
                dim_x: exp.problem.x0.len(),
                dim_y: exp.problem.y0.len(),
                regime: match exp.problem.regime {
                    saddlefw::Regime::NcC => "nc-c".to_string(),
                    saddlefw::Regime::NcSc => "nc-sc".to_string(),
                },
                l_xx: s.l_xx,
                l_yx: s.l_yx,
                l_yy: s.l_yy,
                mu_tilde: s.mu_tilde,
            },
            runs: exp.runs.iter().map(RunSummary::new).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HarnessError::Schema(format!("summary: {e}")))
    }
}

pub const TRACE_FILE: &str = "trace.csv";
pub const SUMMARY_FILE: &str = "summary.json";

pub struct Outputs {
    pub trace: PathBuf,
    pub summary: PathBuf,
}

/// Writes `trace.csv` and `summary.json` into `dir`, creating it if needed.
pub fn write_outputs(cfg: &ExperimentConfig, exp: &Experiment, dir: &Path) -> Result<Outputs> {
    let fail = |what: &Path, e: std::io::Error| HarnessError::Failed(format!("{}: {e}", what.display()));
    std::fs::create_dir_all(dir).map_err(|e| fail(dir, e))?;
    let trace = dir.join(TRACE_FILE);
    let rows: Vec<_> = exp.runs.iter().flat_map(|r| rows_for(r, cfg.timing)).collect();
    let file = std::fs::File::create(&trace).map_err(|e| fail(&trace, e))?;
    write_trace(&rows, std::io::BufWriter::new(file))?;
    let summary = dir.join(SUMMARY_FILE);
    let json = Summary::new(cfg, exp).to_json() + "\n";
    std::fs::write(&summary, json).map_err(|e| fail(&summary, e))?;
    Ok(Outputs { trace, summary })
}
