use std::time::{Duration, Instant};

use super::config::{SolverConfig, StepSchedule};
use super::params::select_best_iterate;
use crate::error::{Error, Result};
use crate::gap::{gap_lmo, gap_po, GapReport};
use crate::linalg::ensure_finite;
use crate::objective::SaddleObjective;
use crate::scalar::Scalar;
use crate::sets::FeasibleSet;

/// State of the run when iteration `k` starts, i.e. at `(x_k, y_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord<T> {
    pub k: usize,
    /// Solver time spent reaching `(x_k, y_k)`; gap evaluation is not counted.
    pub elapsed_seconds: f64,
    pub gap: Option<GapReport<T>>,
    pub infeasibility: Option<T>,
    /// Primal step taken from this state, if one was taken.
    pub tau: Option<T>,
    /// Dual step taken from this state, if one was taken.
    pub sigma: Option<T>,
    pub x_snapshot: Option<Vec<T>>,
    pub y_snapshot: Option<Vec<T>>,
}

#[derive(Debug, Clone)]
pub struct RunResult<T> {
    pub records: Vec<IterationRecord<T>>,
    /// Gap-minimizing evaluated index in the second half of the run.
    pub best_index: Option<usize>,
    pub final_x: Vec<T>,
    pub final_y: Vec<T>,
    pub iterations_completed: usize,
    /// Set when the time budget ended the run.
    pub stopped_early: bool,
    pub config: SolverConfig<T>,
}

impl<T: Scalar> RunResult<T> {
    pub fn evaluated(&self) -> impl Iterator<Item = (&IterationRecord<T>, &GapReport<T>)> {
        self.records.iter().filter_map(|r| r.gap.as_ref().map(|g| (r, g)))
    }

    pub fn record(&self, k: usize) -> Option<&IterationRecord<T>> {
        self.records.get(k).filter(|r| r.k == k)
    }

    pub fn best_gap(&self) -> Option<GapReport<T>> {
        self.best_index.and_then(|t| self.record(t)).and_then(|r| r.gap)
    }

    pub fn initial_gap(&self) -> Option<GapReport<T>> {
        self.records.first().and_then(|r| r.gap)
    }

    pub fn last_evaluated(&self) -> Option<&IterationRecord<T>> {
        self.records.iter().rev().find(|r| r.gap.is_some())
    }
}

pub(crate) enum GapRule<T> {
    Lmo,
    Projection(StepSchedule<T>),
}

pub(crate) struct StepTaken<T> {
    pub tau: T,
    pub sigma: T,
}

pub(crate) struct Problem<'a, T, O: ?Sized> {
    pub obj: &'a O,
    pub x_set: &'a dyn FeasibleSet<T>,
    pub y_set: &'a dyn FeasibleSet<T>,
}

impl<T: Scalar, O: SaddleObjective<T> + ?Sized> Problem<'_, T, O> {
    fn gap(&self, rule: &GapRule<T>, k: usize, x: &[T], y: &[T]) -> Result<GapReport<T>> {
        match rule {
            GapRule::Lmo => gap_lmo(self.obj, self.x_set, self.y_set, x, y),
            GapRule::Projection(s) => gap_po(self.obj, self.x_set, self.y_set, s.value(k), x, y),
        }
    }
}

/// Runs `cfg.iterations` steps of `step`, evaluating gaps on the configured cadence.
pub(crate) fn drive<T, O, F>(
    problem: &Problem<'_, T, O>,
    cfg: &SolverConfig<T>,
    rule: GapRule<T>,
    x0: &[T],
    y0: &[T],
    mut step: F,
) -> Result<RunResult<T>>
where
    T: Scalar,
    O: SaddleObjective<T> + ?Sized,
    F: FnMut(usize, &mut Vec<T>, &mut Vec<T>) -> Result<StepTaken<T>>,
{
    let algorithm = cfg.algorithm.name();
    let wrap = |k: usize| {
        move |e: Error| Error::Solver {
            algorithm,
            iteration: k,
            source: Box::new(e),
        }
    };
    let total = cfg.iterations;
    let every = cfg.eval_every.max(1);
    let mut x = x0.to_vec();
    let mut y = y0.to_vec();
    let mut records = Vec::with_capacity(total.max(1));
    let mut clock = Duration::ZERO;
    let mut stopped_early = false;
    let mut completed = 0;

    for k in 0..total.max(1) {
        let evaluate = total == 0 || k % every == 0 || k + 1 == total;
        let mut record = IterationRecord {
            k,
            elapsed_seconds: clock.as_secs_f64(),
            gap: None,
            infeasibility: None,
            tau: None,
            sigma: None,
            x_snapshot: None,
            y_snapshot: None,
        };
        if evaluate {
            record.gap = Some(problem.gap(&rule, k, &x, &y).map_err(wrap(k))?);
            record.infeasibility = problem.obj.infeasibility(&x);
            if cfg.keep_snapshots {
                record.x_snapshot = Some(x.clone());
                record.y_snapshot = Some(y.clone());
            }
            if k > 0 && cfg.time_budget.is_some_and(|b| clock > b) {
                records.push(record);
                stopped_early = true;
                break;
            }
        }
        if total == 0 {
            records.push(record);
            break;
        }
        let started = Instant::now();
        let taken = step(k, &mut x, &mut y).map_err(wrap(k))?;
        clock += started.elapsed();
        ensure_finite(&x, "primal iterate").map_err(wrap(k))?;
        ensure_finite(&y, "dual iterate").map_err(wrap(k))?;
        record.tau = Some(taken.tau);
        record.sigma = Some(taken.sigma);
        records.push(record);
        completed = k + 1;
    }

    // A run cut short at record k is scored as if it had k + 1 iterations.
    let effective = if stopped_early { records.len() } else { total };
    let best_index = if effective >= 1 {
        Some(select_best_iterate(&records, effective)?)
    } else {
        None
    };
    Ok(RunResult {
        records,
        best_index,
        final_x: x,
        final_y: y,
        iterations_completed: completed,
        stopped_early,
        config: cfg.clone(),
    })
}
