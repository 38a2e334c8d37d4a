//! Single-loop saddle-point solvers and their parameter rules.
//!
//! * [`run_rpdcg`]: Frank-Wolfe step on `x`, Frank-Wolfe step on the
//!   regularized dual with an adaptive step (needs a strongly convex `Y`).
//! * [`run_cg_rpga`]: Frank-Wolfe step on `x`, projected gradient ascent on
//!   the regularized dual.
//! * [`run_spfw`]: both players take plain Frank-Wolfe steps with `2/(k+2)`.
//! * [`run_agp`]: alternating projected gradient descent/ascent with a
//!   vanishing dual regularization.
//!
//! All four share one driver, so records, timing and best-iterate selection
//! are identical across methods.

mod config;
mod driver;
mod params;
mod solvers;

pub use config::{Algorithm, DualStep, SolverConfig, StepSchedule};
pub use driver::{IterationRecord, RunResult};
pub use params::{
    adaptive_sigma, contraction_factor, default_params, default_params_with, scalar_recursion_bound,
    select_best_iterate, DefaultParams, Prefactors, Regime,
};
pub use solvers::{run, run_agp, run_cg_rpga, run_rpdcg, run_spfw};
