use super::config::{Algorithm, DualStep, StepSchedule};
use super::driver::IterationRecord;
use crate::error::{Error, Result};
use crate::objective::Smoothness;
use crate::scalar::Scalar;

/// Adaptive R-PDCG dual step `min{1, alpha * grad_norm / (4 (l_yy + mu))}`.
pub fn adaptive_sigma<T: Scalar>(alpha: T, l_yy: T, mu: T, grad_norm: T) -> Result<T> {
    if !(alpha > T::zero()) {
        return Err(Error::invalid("alpha", "must be positive"));
    }
    if !(grad_norm >= T::zero()) {
        return Err(Error::invalid("grad_norm", "must be nonnegative"));
    }
    let denom = T::lit(4.0) * (l_yy + mu);
    if !(denom > T::zero()) {
        return Err(Error::invalid("l_yy + mu", "must be positive for the adaptive step"));
    }
    Ok((alpha * grad_norm / denom).min(T::one()))
}

/// Per-step contraction of regularized projected gradient ascent,
/// `max{|1 - sigma (l_yy + mu)|, |1 - sigma mu|}`.
pub fn contraction_factor<T: Scalar>(sigma: T, l_yy: T, mu: T) -> T {
    (T::one() - sigma * (l_yy + mu))
        .abs()
        .max((T::one() - sigma * mu).abs())
}

/// Upper bound `9/(k+2)^2 max{a0, 2/m1^2} + (m2/m1)^(2/3) + m2` on sequences
/// obeying `a_{k+1} <= max{1/2, 1 - m1 sqrt(a_k)} a_k + m2`.
pub fn scalar_recursion_bound<T: Scalar>(a0: T, m1: T, m2: T, k: usize) -> Result<T> {
    if !(m1 > T::zero()) || !(m2 > T::zero()) {
        return Err(Error::invalid("m1, m2", "must be positive"));
    }
    if !(a0 >= T::zero()) {
        return Err(Error::invalid("a0", "must be nonnegative"));
    }
    if k < 1 {
        return Err(Error::invalid("k", "bound holds for k >= 1"));
    }
    let kk = T::from_usize_lossy(k) + T::lit(2.0);
    let lead = T::lit(9.0) / (kk * kk) * a0.max(T::lit(2.0) / (m1 * m1));
    Ok(lead + (m2 / m1).powf(T::lit(2.0 / 3.0)) + m2)
}

/// Index in `{ceil(K/2), ..., K-1}` with the smallest evaluated `gap_z`; ties
/// go to the smaller index. For `K = 1` the range is `{0}`.
pub fn select_best_iterate<T: Scalar>(records: &[IterationRecord<T>], iterations: usize) -> Result<usize> {
    if iterations == 0 {
        return Err(Error::NoEvaluatedRecord { lo: 0, hi: 0 });
    }
    let hi = iterations - 1;
    let lo = iterations.div_ceil(2).min(hi);
    let mut best: Option<(usize, T)> = None;
    for r in records.iter().filter(|r| r.k >= lo && r.k <= hi) {
        let Some(g) = r.gap else { continue };
        match best {
            Some((_, z)) if !(g.gap_z < z) => {}
            _ => best = Some((r.k, g.gap_z)),
        }
    }
    best.map(|(k, _)| k).ok_or(Error::NoEvaluatedRecord { lo, hi })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Nonconvex-concave.
    NcC,
    /// Nonconvex-strongly concave.
    NcSc,
}

/// Parameter set returned by [`default_params`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefaultParams<T> {
    pub mu: StepSchedule<T>,
    pub tau: StepSchedule<T>,
    pub sigma: DualStep<T>,
}

/// Multipliers in front of the `K`-dependent rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prefactors<T> {
    pub tau: T,
    pub mu: T,
}

impl<T: Scalar> Prefactors<T> {
    /// `tau = 10 K^-a`, `mu = 1e-3 K^-b` in the nonconvex-concave regime;
    /// unit `tau` prefactor when strongly concave.
    pub fn standard(regime: Regime) -> Self {
        match regime {
            Regime::NcC => Self {
                tau: T::lit(10.0),
                mu: T::lit(1e-3),
            },
            Regime::NcSc => Self {
                tau: T::one(),
                mu: T::zero(),
            },
        }
    }
}

/// Rate-matched parameters for a budget of `iterations` steps with the
/// standard prefactors.
///
/// | method | regime | mu            | tau          | sigma                 |
/// |--------|--------|---------------|--------------|-----------------------|
/// | R-PDCG | NC-C   | 1e-3 K^-1/6   | 10 K^-5/6    | adaptive              |
/// | R-PDCG | NC-SC  | 0             | K^-3/4       | adaptive              |
/// | CG-RPGA| NC-C   | 1e-3 K^-1/4   | 10 K^-3/4    | 2/(L_yy + 2 mu)       |
/// | CG-RPGA| NC-SC  | 0             | K^-1/2       | 2/(L_yy + mu_tilde)   |
/// | SPFW   | any    | 0             | 2/(k+2)      | 2/(k+2)               |
/// | AGP    | any    | 0.1/(k+1)^1/4 | 1/sqrt(k+1)  | 0.2                   |
pub fn default_params<T: Scalar>(
    algorithm: Algorithm,
    regime: Regime,
    iterations: usize,
    smoothness: &Smoothness<T>,
) -> Result<DefaultParams<T>> {
    default_params_with(algorithm, regime, iterations, smoothness, Prefactors::standard(regime))
}

pub fn default_params_with<T: Scalar>(
    algorithm: Algorithm,
    regime: Regime,
    iterations: usize,
    smoothness: &Smoothness<T>,
    pre: Prefactors<T>,
) -> Result<DefaultParams<T>> {
    if iterations == 0 {
        return Err(Error::invalid("iterations", "must be at least 1"));
    }
    if regime == Regime::NcSc && !(smoothness.mu_tilde > T::zero()) {
        return Err(Error::invalid(
            "regime",
            "the strongly concave regime needs mu_tilde > 0",
        ));
    }
    let kf = T::from_usize_lossy(iterations);
    let rate = |c: T, e: f64| c * kf.powf(T::lit(-e));
    let out = match (algorithm, regime) {
        (Algorithm::Rpdcg, Regime::NcC) => DefaultParams {
            mu: StepSchedule::Constant(rate(pre.mu, 1.0 / 6.0)),
            tau: StepSchedule::Constant(rate(pre.tau, 5.0 / 6.0)),
            sigma: DualStep::Adaptive,
        },
        (Algorithm::Rpdcg, Regime::NcSc) => DefaultParams {
            mu: StepSchedule::Constant(T::zero()),
            tau: StepSchedule::Constant(rate(pre.tau, 0.75)),
            sigma: DualStep::Adaptive,
        },
        (Algorithm::CgRpga, Regime::NcC) => {
            let mu = rate(pre.mu, 0.25);
            let denom = smoothness.l_yy + T::lit(2.0) * mu;
            if !(denom > T::zero()) {
                return Err(Error::invalid("mu", "dual step bound needs l_yy + 2 mu > 0"));
            }
            DefaultParams {
                mu: StepSchedule::Constant(mu),
                tau: StepSchedule::Constant(rate(pre.tau, 0.75)),
                sigma: DualStep::Schedule(StepSchedule::Constant(T::lit(2.0) / denom)),
            }
        }
        (Algorithm::CgRpga, Regime::NcSc) => DefaultParams {
            mu: StepSchedule::Constant(T::zero()),
            tau: StepSchedule::Constant(rate(pre.tau, 0.5)),
            sigma: DualStep::Schedule(StepSchedule::Constant(
                T::lit(2.0) / (smoothness.l_yy + smoothness.mu_tilde),
            )),
        },
        (Algorithm::Spfw, _) => DefaultParams {
            mu: StepSchedule::Constant(T::zero()),
            tau: StepSchedule::classic_frank_wolfe(),
            sigma: DualStep::Schedule(StepSchedule::classic_frank_wolfe()),
        },
        (Algorithm::Agp, _) => DefaultParams {
            mu: StepSchedule::power(T::lit(0.1), T::lit(0.25)),
            tau: StepSchedule::power(T::one(), T::lit(0.5)),
            sigma: DualStep::Schedule(StepSchedule::Constant(T::lit(0.2))),
        },
    };
    Ok(out)
}
