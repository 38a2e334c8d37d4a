//! Projection-free primal-dual solvers for saddle-point problems
//! `min_{x in X} max_{y in Y} L(x, y)` with `L` possibly nonconvex in `x` and
//! concave in `y`.
//!
//! The primal set is only accessed through a linear minimization oracle. The
//! dual set is accessed through an LMO (R-PDCG, requires a strongly convex
//! dual set) or a projection (CG-RPGA). Two baselines, SPFW and AGP, share
//! the same driver so traces are directly comparable.
//!
//! Everything is generic over [`Scalar`] (`f32`/`f64`); the `*64` aliases below
//! cover the common case.

// `!(a > b)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algorithms;
pub mod error;
pub mod gap;
pub mod ingest;
pub mod linalg;
pub mod objective;
pub mod problems;
pub mod scalar;
pub mod sets;

pub use algorithms::{
    adaptive_sigma, default_params, run, run_agp, run_cg_rpga, run_rpdcg, run_spfw, scalar_recursion_bound,
    select_best_iterate, Algorithm, DualStep, IterationRecord, Regime, RunResult, SolverConfig, StepSchedule,
};
pub use error::{Error, Result};
pub use gap::{gap_lmo, gap_po, is_epsilon_stationary, DualGapMode, GapReport};
pub use objective::{Regularized, SaddleObjective, Smoothness};
pub use scalar::Scalar;
pub use sets::FeasibleSet;

pub type GapReport64 = GapReport<f64>;
pub type GapReport32 = GapReport<f32>;
pub type SolverConfig64 = SolverConfig<f64>;
pub type SolverConfig32 = SolverConfig<f32>;
pub type RunResult64 = RunResult<f64>;
pub type RunResult32 = RunResult<f32>;
pub type Smoothness64 = Smoothness<f64>;
pub type Mat64 = linalg::Mat<f64>;

/// Crate version, echoed in run summaries.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
