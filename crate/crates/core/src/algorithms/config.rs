use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Rpdcg,
    CgRpga,
    Spfw,
    Agp,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Rpdcg, Algorithm::CgRpga, Algorithm::Spfw, Algorithm::Agp];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Rpdcg => "RPDCG",
            Algorithm::CgRpga => "CGRPGA",
            Algorithm::Spfw => "SPFW",
            Algorithm::Agp => "AGP",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    /// Case-insensitive; hyphens and underscores are ignored (`cg-rpga` works).
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| *c != '-' && *c != '_')
            .collect::<String>()
            .to_ascii_uppercase();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == key)
            .ok_or_else(|| Error::invalid("algorithm", format!("unknown algorithm `{s}`")))
    }
}

/// Step-size sequence indexed by the iteration counter `k >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSchedule<T> {
    Constant(T),
    /// `scale * (k + offset)^(-exponent)`
    Power {
        scale: T,
        exponent: T,
        offset: T,
    },
}

impl<T: Scalar> StepSchedule<T> {
    /// `2 / (k + 2)`
    pub fn classic_frank_wolfe() -> Self {
        StepSchedule::Power {
            scale: T::lit(2.0),
            exponent: T::one(),
            offset: T::lit(2.0),
        }
    }

    /// `scale / (k + 1)^exponent`
    pub fn power(scale: T, exponent: T) -> Self {
        StepSchedule::Power {
            scale,
            exponent,
            offset: T::one(),
        }
    }

    pub fn value(&self, k: usize) -> T {
        match *self {
            StepSchedule::Constant(c) => c,
            StepSchedule::Power {
                scale,
                exponent,
                offset,
            } => scale * (T::from_usize_lossy(k) + offset).powf(-exponent),
        }
    }

    /// Largest value over `k >= 0`, `None` when unbounded.
    pub fn sup(&self) -> Option<T> {
        match *self {
            StepSchedule::Constant(c) => Some(c),
            StepSchedule::Power { scale, exponent, .. } => {
                if scale <= T::zero() || exponent >= T::zero() {
                    Some(self.value(0).max(T::zero()))
                } else {
                    None
                }
            }
        }
    }

    pub(crate) fn validate(&self, name: &'static str) -> Result<()> {
        match *self {
            StepSchedule::Constant(c) => {
                if !c.is_finite() || c < T::zero() {
                    return Err(Error::invalid(name, "must be finite and nonnegative"));
                }
            }
            StepSchedule::Power {
                scale,
                exponent,
                offset,
            } => {
                if !(scale.is_finite() && exponent.is_finite() && offset.is_finite()) {
                    return Err(Error::NonFinite(name));
                }
                if scale < T::zero() {
                    return Err(Error::invalid(name, "scale must be nonnegative"));
                }
                if !(offset > T::zero()) {
                    return Err(Error::invalid(name, "offset must be positive"));
                }
            }
        }
        Ok(())
    }
}

/// Dual step rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DualStep<T> {
    /// `min{1, alpha ||grad_y L_mu|| / (4 (L_yy + mu))}`; R-PDCG only.
    Adaptive,
    Schedule(StepSchedule<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig<T> {
    pub algorithm: Algorithm,
    /// Iteration budget `K`.
    pub iterations: usize,
    /// Dual regularization. R-PDCG and CG-RPGA need a constant.
    pub mu: StepSchedule<T>,
    /// Primal step: convex-combination weight for the Frank-Wolfe methods,
    /// gradient step for AGP.
    pub tau: StepSchedule<T>,
    pub sigma: DualStep<T>,
    /// Regularization anchor `y0`; defaults to the dual starting point.
    pub anchor: Option<Vec<T>>,
    /// Gap evaluation cadence.
    pub eval_every: usize,
    pub seed: u64,
    /// Stop at the first gap evaluation past this much solver time.
    pub time_budget: Option<Duration>,
    /// Keep `(x, y)` at every evaluated record.
    pub keep_snapshots: bool,
}

impl<T: Scalar> SolverConfig<T> {
    pub fn new(algorithm: Algorithm, iterations: usize) -> Self {
        let (tau, sigma) = match algorithm {
            Algorithm::Spfw => (
                StepSchedule::classic_frank_wolfe(),
                DualStep::Schedule(StepSchedule::classic_frank_wolfe()),
            ),
            Algorithm::Rpdcg => (StepSchedule::Constant(T::lit(0.01)), DualStep::Adaptive),
            Algorithm::CgRpga => (
                StepSchedule::Constant(T::lit(0.01)),
                DualStep::Schedule(StepSchedule::Constant(T::lit(0.1))),
            ),
            Algorithm::Agp => (
                StepSchedule::power(T::one(), T::lit(0.5)),
                DualStep::Schedule(StepSchedule::Constant(T::lit(0.2))),
            ),
        };
        Self {
            algorithm,
            iterations,
            mu: StepSchedule::Constant(T::zero()),
            tau,
            sigma,
            anchor: None,
            eval_every: 10,
            seed: 0,
            time_budget: None,
            keep_snapshots: false,
        }
    }

    pub fn with_mu(mut self, mu: T) -> Self {
        self.mu = StepSchedule::Constant(mu);
        self
    }

    pub fn with_tau(mut self, tau: StepSchedule<T>) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_sigma(mut self, sigma: DualStep<T>) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_eval_every(mut self, every: usize) -> Self {
        self.eval_every = every;
        self
    }

    pub fn with_anchor(mut self, anchor: Vec<T>) -> Self {
        self.anchor = Some(anchor);
        self
    }

    pub fn with_snapshots(mut self, keep: bool) -> Self {
        self.keep_snapshots = keep;
        self
    }

    pub fn with_time_budget(mut self, budget: Option<Duration>) -> Self {
        self.time_budget = budget;
        self
    }

    pub(crate) fn constant_mu(&self) -> Result<T> {
        match self.mu {
            StepSchedule::Constant(m) if m.is_finite() && m >= T::zero() => Ok(m),
            StepSchedule::Constant(_) => Err(Error::invalid("mu", "must be finite and nonnegative")),
            StepSchedule::Power { .. } => Err(Error::invalid(
                "mu",
                format!("{} uses a constant regularization", self.algorithm),
            )),
        }
    }
}
