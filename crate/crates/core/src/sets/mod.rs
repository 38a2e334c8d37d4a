//! Constraint sets exposed through their oracles: linear minimization (LMO),
//! Euclidean projection (PO, optional), membership, diameter and, when the set
//! is strongly convex, its modulus.
//!
//! Every LMO resolves an (almost) zero cost vector, `||c|| < 1e-14`, to a fixed
//! canonical point instead of an arbitrary minimizer:
//!
//! | set            | canonical point        |
//! |----------------|------------------------|
//! | ball / chi-sq  | center                 |
//! | simplex        | `e_1`                  |
//! | box            | `lo`                   |
//! | nuclear ball   | zero matrix            |
//! | product        | per-block rule         |

mod ball;
mod boxed;
mod nuclear;
mod product;
mod simplex;

pub use ball::{ChiSquareBall, L2Ball};
pub use boxed::BoxSet;
pub use nuclear::NuclearBall;
pub use product::ProductSet;
pub use simplex::Simplex;

use std::fmt::Debug;

use rand::RngCore;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{ensure_finite, norm};
use crate::scalar::Scalar;

/// Cost vectors with norm below this resolve to the set's canonical point.
pub const ZERO_COST_NORM: f64 = 1e-14;

/// Membership tolerance used for iterate and gap preconditions.
pub const FEASIBILITY_TOL: f64 = 1e-8;

pub trait FeasibleSet<T: Scalar>: Send + Sync + Debug {
    fn name(&self) -> &'static str;

    fn dim(&self) -> usize;

    /// `argmin_{p in set} <c, p>`.
    fn lmo(&self, c: &[T]) -> Result<Vec<T>>;

    /// Euclidean projection, when the set offers one.
    fn project(&self, _p: &[T]) -> Result<Vec<T>> {
        Err(Error::NoProjection(self.name()))
    }

    fn has_projection(&self) -> bool {
        false
    }

    /// Nonnegative measure of how far `p` is outside the set; zero inside.
    fn violation(&self, p: &[T]) -> T;

    fn contains(&self, p: &[T], tol: T) -> bool {
        p.len() == self.dim() && p.iter().all(|v| v.is_finite()) && self.violation(p) <= tol
    }

    /// Closed-form upper bound on `sup ||u - v||` over the set.
    fn diameter(&self) -> T;

    /// Strong-convexity modulus, when the set has one.
    fn strong_convexity(&self) -> Option<T> {
        None
    }

    /// Random feasible point, for tests and sampling-based estimates.
    fn sample(&self, rng: &mut dyn RngCore) -> Vec<T>;
}

pub(crate) fn check_input<T: Scalar>(dim: usize, v: &[T], what: &'static str) -> Result<()> {
    check_dim(what, dim, v.len())?;
    ensure_finite(v, what)
}

pub(crate) fn is_zero_cost<T: Scalar>(c: &[T]) -> bool {
    norm(c) < T::lit(ZERO_COST_NORM)
}

pub(crate) fn uniform01(rng: &mut dyn RngCore) -> f64 {
    use rand::Rng;
    rng.random::<f64>()
}

pub(crate) fn gaussian(rng: &mut dyn RngCore) -> f64 {
    use rand::Rng;
    rng.sample(rand_distr::StandardNormal)
}
