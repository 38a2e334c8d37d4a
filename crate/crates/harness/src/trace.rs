use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::Timing;
use crate::error::{HarnessError, Result};
use crate::runner::AlgorithmRun;

pub const TRACE_HEADER: &str = "algorithm,k,elapsed_seconds,gap_x,gap_y,gap_z,infeasibility,dual_mode";

/// One gap evaluation. `infeasibility` is empty for problems without a constraint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub algorithm: String,
    pub k: usize,
    pub elapsed_seconds: f64,
    pub gap_x: f64,
    pub gap_y: f64,
    pub gap_z: f64,
    pub infeasibility: Option<f64>,
    pub dual_mode: String,
}

pub fn rows_for(run: &AlgorithmRun, timing: Timing) -> Vec<TraceRow> {
    run.result
        .evaluated()
        .map(|(r, g)| TraceRow {
            algorithm: run.algorithm.name().to_string(),
            k: r.k,
            elapsed_seconds: match timing {
                Timing::Wall => r.elapsed_seconds,
                Timing::Off => 0.0,
            },
            gap_x: g.gap_x,
            gap_y: g.gap_y,
            gap_z: g.gap_z,
            infeasibility: r.infeasibility,
            dual_mode: g.mode.as_str().to_string(),
        })
        .collect()
}

pub fn write_trace<W: Write>(rows: &[TraceRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(TRACE_HEADER.split(','))
        .and_then(|_| rows.iter().try_for_each(|r| w.serialize(r)))
        .and_then(|_| w.flush().map_err(csv::Error::from))
        .map_err(|e| HarnessError::Failed(format!("writing trace: {e}")))
}

/// Parses a trace, rejecting any header other than [`TRACE_HEADER`].
pub fn read_trace<R: Read>(source: R, label: &str) -> Result<Vec<TraceRow>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(source);
    let header = r
        .headers()
        .map_err(|e| HarnessError::Schema(format!("{label}: {e}")))?
        .iter()
        .collect::<Vec<_>>()
        .join(",");
    if header != TRACE_HEADER {
        return Err(HarnessError::Schema(format!(
            "{label}: header `{header}` differs from `{TRACE_HEADER}`"
        )));
    }
    r.deserialize()
        .enumerate()
        .map(|(i, row)| row.map_err(|e| HarnessError::Schema(format!("{label}: row {}: {e}", i + 1))))
        .collect()
}

pub fn read_trace_file(path: &Path) -> Result<Vec<TraceRow>> {
    let file =
        std::fs::File::open(path).map_err(|e| HarnessError::config(format!("cannot open {}: {e}", path.display())))?;
    read_trace(std::io::BufReader::new(file), &path.display().to_string())
}
