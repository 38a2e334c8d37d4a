use super::config::{Algorithm, DualStep, SolverConfig, StepSchedule};
use super::driver::{drive, GapRule, Problem, RunResult, StepTaken};
use super::params::adaptive_sigma;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{convex_step, ensure_finite, norm};
use crate::objective::{checked_grads, regularize_dual_grad, SaddleObjective};
use crate::scalar::Scalar;
use crate::sets::{FeasibleSet, FEASIBILITY_TOL};

/// Runs the solver selected by `cfg.algorithm`.
pub fn run<T, O>(
    obj: &O,
    x_set: &dyn FeasibleSet<T>,
    y_set: &dyn FeasibleSet<T>,
    x0: &[T],
    y0: &[T],
    cfg: &SolverConfig<T>,
) -> Result<RunResult<T>>
where
    T: Scalar,
    O: SaddleObjective<T> + ?Sized,
{
    match cfg.algorithm {
        Algorithm::Rpdcg => run_rpdcg(obj, x_set, y_set, x0, y0, cfg),
        Algorithm::CgRpga => run_cg_rpga(obj, x_set, y_set, x0, y0, cfg),
        Algorithm::Spfw => run_spfw(obj, x_set, y_set, x0, y0, cfg),
        Algorithm::Agp => run_agp(obj, x_set, y_set, x0, y0, cfg),
    }
}

fn require_member<T: Scalar>(set: &dyn FeasibleSet<T>, p: &[T], what: &'static str) -> Result<()> {
    check_dim(what, set.dim(), p.len())?;
    ensure_finite(p, what)?;
    if !set.contains(p, T::lit(FEASIBILITY_TOL)) {
        return Err(Error::Infeasible {
            set: set.name(),
            violation: set.violation(p).as_f64(),
        });
    }
    Ok(())
}

/// Shared validation; returns the regularization anchor.
fn prepare<T, O>(
    expected: Algorithm,
    obj: &O,
    x_set: &dyn FeasibleSet<T>,
    y_set: &dyn FeasibleSet<T>,
    x0: &[T],
    y0: &[T],
    cfg: &SolverConfig<T>,
) -> Result<Vec<T>>
where
    T: Scalar,
    O: SaddleObjective<T> + ?Sized,
{
    if cfg.algorithm != expected {
        return Err(Error::invalid(
            "algorithm",
            format!("config is for {}, solver is {}", cfg.algorithm, expected),
        ));
    }
    if cfg.eval_every == 0 {
        return Err(Error::invalid("eval_every", "must be at least 1"));
    }
    obj.smoothness().validate()?;
    check_dim("primal set", obj.dim_x(), x_set.dim())?;
    check_dim("dual set", obj.dim_y(), y_set.dim())?;
    require_member(x_set, x0, "primal start")?;
    require_member(y_set, y0, "dual start")?;
    cfg.tau.validate("tau")?;
    cfg.mu.validate("mu")?;
    if let DualStep::Schedule(s) = &cfg.sigma {
        s.validate("sigma")?;
    }
    match &cfg.anchor {
        Some(a) => {
            require_member(y_set, a, "regularization anchor")?;
            Ok(a.clone())
        }
        None => Ok(y0.to_vec()),
    }
}

/// Convex-combination weight for step `k`, clamped to `[0, 1]`.
struct UnitStep<T> {
    schedule: StepSchedule<T>,
    name: &'static str,
    warned: bool,
}

impl<T: Scalar> UnitStep<T> {
    fn new(schedule: StepSchedule<T>, name: &'static str) -> Self {
        Self {
            schedule,
            name,
            warned: false,
        }
    }

    fn at(&mut self, k: usize) -> T {
        let v = self.schedule.value(k);
        if v > T::one() {
            if !self.warned {
                log::warn!("{} = {} exceeds 1 at k = {k}; clamped to 1", self.name, v);
                self.warned = true;
            }
            return T::one();
        }
        v
    }
}

fn negated<T: Scalar>(g: &[T]) -> Vec<T> {
    g.iter().map(|&v| -v).collect()
}

/// Frank-Wolfe step on `x`, Frank-Wolfe step on the regularized dual.
///
/// The dual step is either adaptive, `min{1, alpha ||grad_y L_mu|| / (4 (L_yy + mu))}`,
/// or a schedule clamped to `[0, 1]`. Gaps use the LMO form.
pub fn run_rpdcg<T, O>(
    obj: &O,
    x_set: &dyn FeasibleSet<T>,
    y_set: &dyn FeasibleSet<T>,
    x0: &[T],
    y0: &[T],
    cfg: &SolverConfig<T>,
) -> Result<RunResult<T>>
where
    T: Scalar,
    O: SaddleObjective<T> + ?Sized,
{
    let anchor = prepare(Algorithm::Rpdcg, obj, x_set, y_set, x0, y0, cfg)?;
    let mu = cfg.constant_mu()?;
    let l_yy = obj.smoothness().l_yy;
    let adaptive = matches!(cfg.sigma, DualStep::Adaptive);
    let alpha = y_set.strong_convexity();
    if (adaptive || mu > T::zero()) && alpha.is_none() {
        return Err(Error::MissingStrongConvexity("R-PDCG"));
    }
    if adaptive && !(l_yy + mu > T::zero()) {
        return Err(Error::invalid("mu", "adaptive dual step needs l_yy + mu > 0"));
    }
    let mut tau = UnitStep::new(cfg.tau, "tau");
    let mut sigma_sched = match cfg.sigma {
        DualStep::Schedule(s) => Some(UnitStep::new(s, "sigma")),
        DualStep::Adaptive => None,
    };
    let problem = Problem { obj, x_set, y_set };
    drive(&problem, cfg, GapRule::Lmo, x0, y0, |k, x, y| {
        let (gx, gy) = checked_grads(obj, x, y)?;
        let s = x_set.lmo(&gx)?;
        let gy = regularize_dual_grad(gy, mu, y, &anchor);
        let p = y_set.lmo(&negated(&gy))?;
        let t = tau.at(k);
        let sigma = match (&mut sigma_sched, alpha) {
            (Some(sched), _) => sched.at(k),
            (None, Some(a)) => adaptive_sigma(a, l_yy, mu, norm(&gy))?,
            (None, None) => unreachable!("checked above"),
        };
        convex_step(x, &s, t);
        convex_step(y, &p, sigma);
        Ok(StepTaken { tau: t, sigma })
    })
}

/// Largest admissible constant dual step for CG-RPGA, `None` when unbounded.
fn cg_rpga_sigma_bound<T: Scalar>(l_yy: T, mu_tilde: T, mu: T) -> Option<T> {
    let denom = if mu > T::zero() {
        l_yy + T::lit(2.0) * mu
    } else {
        l_yy + mu_tilde
    };
    (denom > T::zero()).then(|| T::lit(2.0) / denom)
}

/// Frank-Wolfe step on `x`, projected gradient ascent on the regularized dual.
/// Gaps use the PO form with the run's dual step.
pub fn run_cg_rpga<T, O>(
    obj: &O,
    x_set: &dyn FeasibleSet<T>,
    y_set: &dyn FeasibleSet<T>,
    x0: &[T],
    y0: &[T],
    cfg: &SolverConfig<T>,
) -> Result<RunResult<T>>
where
    T: Scalar,
    O: SaddleObjective<T> + ?Sized,
{
    let anchor = prepare(Algorithm::CgRpga, obj, x_set, y_set, x0, y0, cfg)?;
    if !y_set.has_projection() {
        return Err(Error::NoProjection(y_set.name()));
    }
    let mu = cfg.constant_mu()?;
    let sigma = match cfg.sigma {
        DualStep::Schedule(s) => s,
        DualStep::Adaptive => return Err(Error::invalid("sigma", "the adaptive step is specific to R-PDCG")),
    };
    let sup = sigma
        .sup()
        .ok_or_else(|| Error::invalid("sigma", "schedule is unbounded"))?;
    let sm = obj.smoothness();
    if let Some(bound) = cg_rpga_sigma_bound(sm.l_yy, sm.mu_tilde, mu) {
        // Relative slack so the bound itself, recomputed elsewhere, is accepted.
        if sup > bound * (T::one() + T::tol_floor(1e-12)) {
            return Err(Error::invalid(
                "sigma",
                format!(
                    "step {:e} exceeds the admissible bound {:e}",
                    sup.as_f64(),
                    bound.as_f64()
                ),
            ));
        }
    }
    if !(sigma.value(0) > T::zero()) {
        return Err(Error::invalid("sigma", "must be positive"));
    }
    let mut tau = UnitStep::new(cfg.tau, "tau");
    let problem = Problem { obj, x_set, y_set };
    drive(&problem, cfg, GapRule::Projection(sigma), x0, y0, |k, x, y| {
        let (gx, gy) = checked_grads(obj, x, y)?;
        let s = x_set.lmo(&gx)?;
        let gy = regularize_dual_grad(gy, mu, y, &anchor);
        let step = sigma.value(k);
        let ascent: Vec<T> = y.iter().zip(&gy).map(|(&yi, &gi)| yi + step * gi).collect();
        let t = tau.at(k);
        convex_step(x, &s, t);
        *y = y_set.project(&ascent)?;
        Ok(StepTaken { tau: t, sigma: step })
    })
}

/// Simultaneous Frank-Wolfe steps on both players without regularization.
/// Gaps use the LMO form.
pub fn run_spfw<T, O>(
    obj: &O,
    x_set: &dyn FeasibleSet<T>,
    y_set: &dyn FeasibleSet<T>,
    x0: &[T],
    y0: &[T],
    cfg: &SolverConfig<T>,
) -> Result<RunResult<T>>
where
    T: Scalar,
    O: SaddleObjective<T> + ?Sized,
{
    prepare(Algorithm::Spfw, obj, x_set, y_set, x0, y0, cfg)?;
    if cfg.constant_mu()? != T::zero() {
        return Err(Error::invalid("mu", "SPFW is unregularized"));
    }
    let sigma = match cfg.sigma {
        DualStep::Schedule(s) => s,
        DualStep::Adaptive => return Err(Error::invalid("sigma", "the adaptive step is specific to R-PDCG")),
    };
    let mut tau = UnitStep::new(cfg.tau, "tau");
    let mut sigma = UnitStep::new(sigma, "sigma");
    let problem = Problem { obj, x_set, y_set };
    drive(&problem, cfg, GapRule::Lmo, x0, y0, |k, x, y| {
        let (gx, gy) = checked_grads(obj, x, y)?;
        let s = x_set.lmo(&gx)?;
        let p = y_set.lmo(&negated(&gy))?;
        let (t, sg) = (tau.at(k), sigma.at(k));
        convex_step(x, &s, t);
        convex_step(y, &p, sg);
        Ok(StepTaken { tau: t, sigma: sg })
    })
}

/// Alternating projected gradient descent on `x` and ascent on `y`, the dual
/// step using the updated `x` and a vanishing regularization `mu_k`
/// anchored at `y0`. Gaps use the PO form with the dual step.
pub fn run_agp<T, O>(
    obj: &O,
    x_set: &dyn FeasibleSet<T>,
    y_set: &dyn FeasibleSet<T>,
    x0: &[T],
    y0: &[T],
    cfg: &SolverConfig<T>,
) -> Result<RunResult<T>>
where
    T: Scalar,
    O: SaddleObjective<T> + ?Sized,
{
    let anchor = prepare(Algorithm::Agp, obj, x_set, y_set, x0, y0, cfg)?;
    for set in [x_set, y_set] {
        if !set.has_projection() {
            return Err(Error::NoProjection(set.name()));
        }
    }
    let gamma = match cfg.sigma {
        DualStep::Schedule(s) => s,
        DualStep::Adaptive => return Err(Error::invalid("sigma", "the adaptive step is specific to R-PDCG")),
    };
    if !(gamma.value(0) > T::zero()) {
        return Err(Error::invalid("sigma", "must be positive"));
    }
    let (beta, mu) = (cfg.tau, cfg.mu);
    let problem = Problem { obj, x_set, y_set };
    drive(&problem, cfg, GapRule::Projection(gamma), x0, y0, |k, x, y| {
        let (gx, _) = checked_grads(obj, x, y)?;
        let b = beta.value(k);
        let descent: Vec<T> = x.iter().zip(&gx).map(|(&xi, &gi)| xi - b * gi).collect();
        *x = x_set.project(&descent)?;
        let (_, gy) = checked_grads(obj, x, y)?;
        let gy = regularize_dual_grad(gy, mu.value(k), y, &anchor);
        let g = gamma.value(k);
        let ascent: Vec<T> = y.iter().zip(&gy).map(|(&yi, &gi)| yi + g * gi).collect();
        *y = y_set.project(&ascent)?;
        Ok(StepTaken { tau: b, sigma: g })
    })
}
