use rand::RngCore;

use super::{check_input, gaussian, is_zero_cost, uniform01, FeasibleSet};
use crate::error::{Error, Result};
use crate::linalg::{nuclear_norm, project_capped_nonneg, svd, top_singular_pair, Mat, PowerIteration};
use crate::scalar::Scalar;

/// Nuclear-norm ball `{M in R^{rows x cols} : ||M||_* <= radius}`, stored
/// row-major.
///
/// The LMO needs only the leading singular pair of the cost matrix (power
/// iteration); the projection needs a full SVD.
#[derive(Debug, Clone, PartialEq)]
pub struct NuclearBall<T> {
    rows: usize,
    cols: usize,
    radius: T,
    power: PowerIteration,
}

impl<T: Scalar> NuclearBall<T> {
    pub fn new(rows: usize, cols: usize, radius: T) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("shape", "matrix dimensions must be positive"));
        }
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::invalid("radius", "must be finite and positive"));
        }
        Ok(Self {
            rows,
            cols,
            radius,
            power: PowerIteration::default(),
        })
    }

    /// Overrides the power-iteration stopping rule of the LMO.
    pub fn with_power_iteration(mut self, opts: PowerIteration) -> Self {
        self.power = opts;
        self
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    fn as_mat(&self, v: &[T]) -> Mat<T> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: v.to_vec(),
        }
    }
}

impl<T: Scalar> FeasibleSet<T> for NuclearBall<T> {
    fn name(&self) -> &'static str {
        "nuclear ball"
    }

    fn dim(&self) -> usize {
        self.rows * self.cols
    }

    /// `-radius * u1 v1^T` for the top singular pair of the cost matrix.
    fn lmo(&self, c: &[T]) -> Result<Vec<T>> {
        check_input(self.dim(), c, "lmo cost")?;
        if is_zero_cost(c) {
            return Ok(vec![T::zero(); self.dim()]);
        }
        let Some(top) = top_singular_pair(&self.as_mat(c), self.power)? else {
            return Ok(vec![T::zero(); self.dim()]);
        };
        let mut out = Vec::with_capacity(self.dim());
        for &ui in &top.u {
            let s = -self.radius * ui;
            out.extend(top.v.iter().map(|&vj| s * vj));
        }
        Ok(out)
    }

    /// Full SVD, then the singular values are projected onto the l1 ball.
    fn project(&self, p: &[T]) -> Result<Vec<T>> {
        check_input(self.dim(), p, "projection input")?;
        let m = self.as_mat(p);
        let dec = svd(&m);
        if dec.s.iter().copied().sum::<T>() <= self.radius {
            return Ok(p.to_vec());
        }
        let shrunk = project_capped_nonneg(&dec.s, self.radius);
        Ok(dec.reconstruct_with(&shrunk).data)
    }

    fn has_projection(&self) -> bool {
        true
    }

    fn violation(&self, p: &[T]) -> T {
        (nuclear_norm(&self.as_mat(p)) - self.radius).max(T::zero())
    }

    fn diameter(&self) -> T {
        T::lit(2.0) * self.radius
    }

    /// Gaussian matrix rescaled to a uniformly drawn nuclear norm in `[0, radius]`.
    fn sample(&self, rng: &mut dyn RngCore) -> Vec<T> {
        let g: Vec<T> = (0..self.dim()).map(|_| T::lit(gaussian(rng))).collect();
        let nn = nuclear_norm(&self.as_mat(&g));
        let target = self.radius * T::lit(uniform01(rng));
        if nn <= T::zero() {
            return vec![T::zero(); self.dim()];
        }
        g.into_iter().map(|v| v * target / nn).collect()
    }
}
