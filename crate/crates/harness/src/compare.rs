//! Threshold and ordering checks over traces.
//!
//! ```toml
//! # best gap_z of CGRPGA in the trace is at most 1e-2
//! [[check]]
//! algorithm = "CGRPGA"
//! max = 1e-2
//!
//! # final gap_z strictly below the initial one
//! [[check]]
//! algorithm = "CGRPGA"
//! at = "final"
//! below = { algorithm = "CGRPGA", at = "initial" }
//! strict = true
//!
//! # no worse than the baseline run, up to 10%
//! [[check]]
//! algorithm = "RPDCG"
//! below = { algorithm = "RPDCG", source = "baseline" }
//! factor = 1.1
//! ```
//!
//! `at` is `best` (default; smallest `gap_z` over the second half of the
//! block, reporting the chosen row's metric), `final`, `initial` or `min`.
//! `metric` is `gap_z` (default), `gap_x`, `gap_y` or `infeasibility`.
//! `source` is `trace` (default) or `baseline`. A check holds when
//! `value <= factor * bound` (`<` with `strict`).

use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::error::{HarnessError, Result};
use crate::trace::{read_trace_file, TraceRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    GapX,
    GapY,
    #[default]
    GapZ,
    Infeasibility,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum At {
    #[default]
    Best,
    Final,
    Initial,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    #[default]
    Trace,
    Baseline,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Target {
    pub algorithm: String,
    #[serde(default)]
    pub metric: Metric,
    #[serde(default)]
    pub at: At,
    #[serde(default)]
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub algorithm: String,
    #[serde(default)]
    pub metric: Metric,
    #[serde(default)]
    pub at: At,
    #[serde(default)]
    pub source: Source,
    pub max: Option<f64>,
    pub below: Option<Target>,
    #[serde(default)]
    pub strict: bool,
    #[serde(default = "unit")]
    pub factor: f64,
}

fn unit() -> f64 {
    1.0
}

impl Check {
    fn target(&self) -> Target {
        Target {
            algorithm: self.algorithm.clone(),
            metric: self.metric,
            at: self.at,
            source: self.source,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareSpec {
    #[serde(default, rename = "check")]
    pub checks: Vec<Check>,
}

impl CompareSpec {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let spec: Self =
            toml::from_str(text).map_err(|e| HarnessError::config(format!("compare spec: {}", e.message())))?;
        for (i, c) in spec.checks.iter().enumerate() {
            if c.max.is_some() == c.below.is_some() {
                return Err(HarnessError::config(format!(
                    "check[{i}]: set exactly one of `max` and `below`"
                )));
            }
            if !(c.factor.is_finite() && c.factor >= 0.0) {
                return Err(HarnessError::config(format!("check[{i}].factor: must be nonnegative")));
            }
        }
        Ok(spec)
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let src = match self.source {
            Source::Trace => "",
            Source::Baseline => "baseline ",
        };
        let at = match self.at {
            At::Best => "best",
            At::Final => "final",
            At::Initial => "initial",
            At::Min => "min",
        };
        let metric = match self.metric {
            Metric::GapX => "gap_x",
            Metric::GapY => "gap_y",
            Metric::GapZ => "gap_z",
            Metric::Infeasibility => "infeasibility",
        };
        write!(f, "{src}{} {at} {metric}", self.algorithm)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub passed: bool,
    pub line: String,
}

fn metric_of(row: &TraceRow, m: Metric) -> Option<f64> {
    match m {
        Metric::GapX => Some(row.gap_x),
        Metric::GapY => Some(row.gap_y),
        Metric::GapZ => Some(row.gap_z),
        Metric::Infeasibility => row.infeasibility,
    }
}

fn resolve(t: &Target, trace: &[TraceRow], baseline: &[TraceRow]) -> Result<f64> {
    let rows: Vec<&TraceRow> = match t.source {
        Source::Trace => trace,
        Source::Baseline => baseline,
    }
    .iter()
    .filter(|r| r.algorithm.eq_ignore_ascii_case(&t.algorithm))
    .collect();
    let (first, last) = match (rows.first(), rows.last()) {
        (Some(f), Some(l)) => (*f, *l),
        _ => return Err(HarnessError::config(format!("no rows for {t}"))),
    };
    let missing = || HarnessError::config(format!("{t}: metric is empty"));
    match t.at {
        At::Initial => metric_of(first, t.metric).ok_or_else(missing),
        At::Final => metric_of(last, t.metric).ok_or_else(missing),
        At::Min => rows
            .iter()
            .map(|r| metric_of(r, t.metric).ok_or_else(missing))
            .try_fold(f64::INFINITY, |acc, v| v.map(|v| acc.min(v))),
        At::Best => {
            let hi = last.k;
            let lo = (hi + 1).div_ceil(2).min(hi);
            let mut best: Option<&TraceRow> = None;
            for r in rows.iter().filter(|r| r.k >= lo && r.k <= hi) {
                if best.is_none_or(|b| r.gap_z < b.gap_z) {
                    best = Some(r);
                }
            }
            best.and_then(|r| metric_of(r, t.metric)).ok_or_else(missing)
        }
    }
}

/// Evaluates every check. `Err` only for checks that cannot be evaluated.
pub fn evaluate(spec: &CompareSpec, trace: &[TraceRow], baseline: &[TraceRow]) -> Result<Vec<CheckOutcome>> {
    spec.checks
        .iter()
        .map(|c| {
            let lhs_t = c.target();
            let lhs = resolve(&lhs_t, trace, baseline)?;
            let (bound, rhs_desc) = match (&c.max, &c.below) {
                (Some(m), _) => (*m, format!("{m:e}")),
                (None, Some(t)) => {
                    let v = resolve(t, trace, baseline)?;
                    (v, format!("{t} = {v:e}"))
                }
                (None, None) => unreachable!("validated on load"),
            };
            let limit = c.factor * bound;
            let passed = if c.strict { lhs < limit } else { lhs <= limit };
            let op = if c.strict { "<" } else { "<=" };
            let scale = if c.factor == 1.0 {
                String::new()
            } else {
                format!("{} * ", c.factor)
            };
            Ok(CheckOutcome {
                passed,
                line: format!(
                    "{} {lhs_t} = {lhs:e} {op} {scale}{rhs_desc}",
                    if passed { "PASS" } else { "FAIL" }
                ),
            })
        })
        .collect()
}

/// Loads both traces and the spec, then evaluates. Exit code 0 iff every check holds.
pub fn compare_files(trace: &Path, baseline: &Path, spec: &Path) -> Result<Vec<CheckOutcome>> {
    let t = read_trace_file(trace)?;
    let b = read_trace_file(baseline)?;
    let text = std::fs::read_to_string(spec)
        .map_err(|e| HarnessError::config(format!("cannot read {}: {e}", spec.display())))?;
    evaluate(&CompareSpec::from_toml_str(&text)?, &t, &b)
}
