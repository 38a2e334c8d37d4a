//! Experiment configuration, read from TOML.
//!
//! ```toml
//! format_version = 1
//! seed = 7
//! iterations = 1000
//! eval_every = 10
//! output = "out/quadratic"
//!
//! [problem]
//! kind = "quadratic"
//! dim_x = 10
//! dim_y = 5
//! mu_tilde = 1.0
//!
//! [[algorithms]]
//! name = "CGRPGA"
//! sigma = 1.0
//!
//! [[algorithms]]
//! name = "RPDCG"
//! tau = { scale = 10.0, exponent = 0.8333333333333334 }
//! ```

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Duration;

use saddlefw::algorithms::Prefactors;
use saddlefw::{Algorithm, DualStep, Regime, StepSchedule};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// Version of the config layout, echoed in every run summary.
pub const CONFIG_FORMAT_VERSION: u32 = 1;

/// Overrides the `output` directory of any config.
pub const OUTPUT_DIR_ENV: &str = "SADDLEFW_OUTPUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub format_version: u32,
    pub seed: u64,
    /// Iteration budget `K` shared by all algorithms.
    pub iterations: usize,
    #[serde(default = "default_eval_every")]
    pub eval_every: usize,
    #[serde(default = "default_output")]
    pub output: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_budget_seconds: Option<f64>,
    /// Run the algorithms on separate threads. Timings are then not comparable.
    #[serde(default)]
    pub parallel: bool,
    #[serde(default)]
    pub timing: Timing,
    /// Parameter regime for the default schedules; inferred from the problem when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regime: Option<RegimeSpec>,
    pub problem: ProblemSpec,
    pub algorithms: Vec<AlgorithmSpec>,
}

fn default_eval_every() -> usize {
    10
}

fn default_output() -> String {
    "out".to_string()
}

fn one() -> f64 {
    1.0
}

fn yes() -> bool {
    true
}

fn default_smoothness_samples() -> usize {
    200
}

/// `wall` records solver seconds; `off` writes zero so traces are byte-stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Timing {
    #[default]
    Wall,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeSpec {
    #[serde(rename = "nc-c")]
    NcC,
    #[serde(rename = "nc-sc")]
    NcSc,
}

impl From<RegimeSpec> for Regime {
    fn from(r: RegimeSpec) -> Self {
        match r {
            RegimeSpec::NcC => Regime::NcC,
            RegimeSpec::NcSc => Regime::NcSc,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProblemSpec {
    Quadratic(QuadraticSpec),
    Dictionary(DictionarySpec),
    Robust(RobustSpec),
}

impl ProblemSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            ProblemSpec::Quadratic(_) => "quadratic",
            ProblemSpec::Dictionary(_) => "dictionary",
            ProblemSpec::Robust(_) => "robust",
        }
    }
}

/// Random quadratic saddle over centered balls; starts at `x_radius / 2`
/// along the all-ones direction with `y = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadraticSpec {
    pub dim_x: usize,
    pub dim_y: usize,
    pub mu_tilde: f64,
    #[serde(default = "one")]
    pub x_radius: f64,
    #[serde(default = "one")]
    pub y_radius: f64,
}

/// Synthetic dictionary refinement; `bound` is the dual interval `[0, B]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DictionarySpec {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub l: usize,
    pub q: usize,
    pub n_prime: usize,
    pub delta: f64,
    pub radius: f64,
    #[serde(default = "one")]
    pub bound: f64,
}

/// Robust classification on a LIBSVM file (`dataset`, relative to the config
/// file) or on generated data (`synthetic`). Starts at `theta = 0` with
/// uniform weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobustSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset: Option<String>,
    #[serde(default = "yes")]
    pub one_based: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subsample: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synthetic: Option<SyntheticSpec>,
    /// Nuclear-norm radius of the weight matrix.
    pub radius: f64,
    #[serde(default = "one")]
    pub rho: f64,
    /// Random pairs used to estimate `l_xx` and `l_yx`.
    #[serde(default = "default_smoothness_samples")]
    pub smoothness_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub samples: usize,
    pub features: usize,
    pub classes: usize,
    pub nnz_per_row: usize,
    pub noise: f64,
}

/// A number is a constant; a table is `scale * (k + offset)^-exponent` with
/// `offset` defaulting to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScheduleSpec {
    Constant(f64),
    Power {
        scale: f64,
        exponent: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        offset: Option<f64>,
    },
}

impl ScheduleSpec {
    pub fn to_schedule(self) -> StepSchedule<f64> {
        match self {
            ScheduleSpec::Constant(c) => StepSchedule::Constant(c),
            ScheduleSpec::Power {
                scale,
                exponent,
                offset,
            } => StepSchedule::Power {
                scale,
                exponent,
                offset: offset.unwrap_or(1.0),
            },
        }
    }

    pub fn from_schedule(s: StepSchedule<f64>) -> Self {
        match s {
            StepSchedule::Constant(c) => ScheduleSpec::Constant(c),
            StepSchedule::Power {
                scale,
                exponent,
                offset,
            } => ScheduleSpec::Power {
                scale,
                exponent,
                offset: Some(offset),
            },
        }
    }

    fn check(&self, field: &str) -> Result<()> {
        let ok = match *self {
            ScheduleSpec::Constant(c) => c.is_finite() && c >= 0.0,
            ScheduleSpec::Power {
                scale,
                exponent,
                offset,
            } => {
                scale.is_finite()
                    && scale >= 0.0
                    && exponent.is_finite()
                    && offset.is_none_or(|o| o.is_finite() && o > 0.0)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(HarnessError::config(format!(
                "{field}: needs finite nonnegative values and a positive offset"
            )))
        }
    }
}

/// `"adaptive"` or a schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SigmaSpec {
    Rule(String),
    Schedule(ScheduleSpec),
}

impl SigmaSpec {
    pub fn to_dual_step(&self, field: &str) -> Result<DualStep<f64>> {
        match self {
            SigmaSpec::Rule(r) if r == "adaptive" => Ok(DualStep::Adaptive),
            SigmaSpec::Rule(r) => Err(HarnessError::config(format!(
                "{field}: unknown rule `{r}`, expected \"adaptive\" or a schedule"
            ))),
            SigmaSpec::Schedule(s) => {
                s.check(field)?;
                Ok(DualStep::Schedule(s.to_schedule()))
            }
        }
    }

    pub fn from_dual_step(s: DualStep<f64>) -> Self {
        match s {
            DualStep::Adaptive => SigmaSpec::Rule("adaptive".to_string()),
            DualStep::Schedule(s) => SigmaSpec::Schedule(ScheduleSpec::from_schedule(s)),
        }
    }
}

/// One algorithm to run. Unset parameters come from the rate-matched defaults
/// for the regime and budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<ScheduleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<ScheduleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<SigmaSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_prefactor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_prefactor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eval_every: Option<usize>,
}

impl AlgorithmSpec {
    pub fn named(name: &str) -> Self {
        Self {
            name: name.to_string(),
            mu: None,
            tau: None,
            sigma: None,
            tau_prefactor: None,
            mu_prefactor: None,
            eval_every: None,
        }
    }

    pub fn prefactors(&self, regime: Regime) -> Prefactors<f64> {
        let std = Prefactors::standard(regime);
        Prefactors {
            tau: self.tau_prefactor.unwrap_or(std.tau),
            mu: self.mu_prefactor.unwrap_or(std.mu),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)
            .map_err(|e| HarnessError::config(e.message().to_string() + &span_hint(text, e.span())))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes to TOML")
    }

    /// Parsed algorithm list, in config order.
    pub fn parsed_algorithms(&self) -> Result<Vec<Algorithm>> {
        self.algorithms
            .iter()
            .enumerate()
            .map(|(i, a)| {
                a.name.parse::<Algorithm>().map_err(|_| {
                    HarnessError::config(format!(
                        "algorithms[{i}].name: unknown algorithm `{}` (expected one of RPDCG, CGRPGA, SPFW, AGP)",
                        a.name
                    ))
                })
            })
            .collect()
    }

    pub fn time_budget(&self) -> Option<Duration> {
        self.time_budget_seconds.map(Duration::from_secs_f64)
    }

    /// Dataset path resolved against the directory of the config file.
    pub fn dataset_path(&self, base_dir: &Path) -> Option<PathBuf> {
        match &self.problem {
            ProblemSpec::Robust(RobustSpec { dataset: Some(d), .. }) => Some(base_dir.join(d)),
            _ => None,
        }
    }

    /// Output directory: the environment override, else `output` relative to `base_dir`.
    pub fn output_dir(&self, base_dir: &Path) -> PathBuf {
        match std::env::var_os(OUTPUT_DIR_ENV) {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir),
            _ => base_dir.join(&self.output),
        }
    }

    pub fn validate(&self, base_dir: &Path) -> Result<()> {
        if self.format_version != CONFIG_FORMAT_VERSION {
            return Err(HarnessError::config(format!(
                "format_version: expected {CONFIG_FORMAT_VERSION}, got {}",
                self.format_version
            )));
        }
        if self.iterations == 0 {
            return Err(HarnessError::config("iterations: must be at least 1"));
        }
        if self.eval_every == 0 {
            return Err(HarnessError::config("eval_every: must be at least 1"));
        }
        if let Some(t) = self.time_budget_seconds {
            if !(t.is_finite() && t > 0.0) {
                return Err(HarnessError::config("time_budget_seconds: must be positive"));
            }
        }
        if self.algorithms.is_empty() {
            return Err(HarnessError::config("algorithms: at least one algorithm is required"));
        }
        let parsed = self.parsed_algorithms()?;
        let mut seen = BTreeSet::new();
        for (i, (alg, spec)) in parsed.iter().zip(&self.algorithms).enumerate() {
            if !seen.insert(alg.name()) {
                return Err(HarnessError::config(format!(
                    "algorithms[{i}].name: {alg} is listed twice"
                )));
            }
            if let Some(m) = &spec.mu {
                m.check(&format!("algorithms[{i}].mu"))?;
            }
            if let Some(t) = &spec.tau {
                t.check(&format!("algorithms[{i}].tau"))?;
            }
            if let Some(s) = &spec.sigma {
                s.to_dual_step(&format!("algorithms[{i}].sigma"))?;
            }
            if spec.eval_every == Some(0) {
                return Err(HarnessError::config(format!(
                    "algorithms[{i}].eval_every: must be at least 1"
                )));
            }
            for (field, v) in [
                ("tau_prefactor", spec.tau_prefactor),
                ("mu_prefactor", spec.mu_prefactor),
            ] {
                if let Some(v) = v {
                    if !(v.is_finite() && v >= 0.0) {
                        return Err(HarnessError::config(format!(
                            "algorithms[{i}].{field}: must be finite and nonnegative"
                        )));
                    }
                }
            }
        }
        self.validate_problem(base_dir)
    }

    fn validate_problem(&self, base_dir: &Path) -> Result<()> {
        let positive = |field: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(HarnessError::config(format!("problem.{field}: must be positive")))
            }
        };
        match &self.problem {
            ProblemSpec::Quadratic(q) => {
                if q.dim_x == 0 || q.dim_y == 0 {
                    return Err(HarnessError::config("problem.dim_x, dim_y: must be positive"));
                }
                if !(q.mu_tilde.is_finite() && q.mu_tilde >= 0.0) {
                    return Err(HarnessError::config("problem.mu_tilde: must be nonnegative"));
                }
                positive("x_radius", q.x_radius)?;
                positive("y_radius", q.y_radius)?;
            }
            ProblemSpec::Dictionary(d) => {
                if [d.m, d.n, d.p, d.l, d.q, d.n_prime].contains(&0) {
                    return Err(HarnessError::config("problem: dictionary dimensions must be positive"));
                }
                if d.p > d.q {
                    return Err(HarnessError::config("problem.q: must be at least p"));
                }
                positive("delta", d.delta)?;
                positive("radius", d.radius)?;
                positive("bound", d.bound)?;
            }
            ProblemSpec::Robust(r) => {
                match (&r.dataset, &r.synthetic) {
                    (Some(_), Some(_)) | (None, None) => {
                        return Err(HarnessError::config(
                            "problem: set exactly one of `dataset` and `synthetic`",
                        ))
                    }
                    (Some(_), None) => {
                        let path = self.dataset_path(base_dir).expect("dataset set");
                        if !path.is_file() {
                            return Err(HarnessError::config(format!(
                                "problem.dataset: {} does not exist",
                                path.display()
                            )));
                        }
                    }
                    (None, Some(s)) => {
                        if s.samples == 0 || s.features == 0 || s.classes < 2 {
                            return Err(HarnessError::config(
                                "problem.synthetic: needs samples, features and at least two classes",
                            ));
                        }
                    }
                }
                if r.subsample == Some(0) {
                    return Err(HarnessError::config("problem.subsample: must be positive"));
                }
                if r.smoothness_samples == 0 {
                    return Err(HarnessError::config("problem.smoothness_samples: must be positive"));
                }
                positive("radius", r.radius)?;
                positive("rho", r.rho)?;
            }
        }
        Ok(())
    }
}

fn span_hint(text: &str, span: Option<std::ops::Range<usize>>) -> String {
    match span {
        Some(s) => {
            let line = text[..s.start.min(text.len())].matches('\n').count() + 1;
            format!(" (line {line})")
        }
        None => String::new(),
    }
}
