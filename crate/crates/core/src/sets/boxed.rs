use rand::RngCore;

use super::{check_input, is_zero_cost, uniform01, FeasibleSet};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Axis-aligned box `{p : lo <= p <= hi}`.
///
/// A one-dimensional box is the Euclidean ball of radius `(hi - lo)/2` around
/// its midpoint and reports that ball's modulus `2 / (hi - lo)`; boxes in two
/// or more dimensions are not strongly convex.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxSet<T> {
    lo: Vec<T>,
    hi: Vec<T>,
}

impl<T: Scalar> BoxSet<T> {
    pub fn new(lo: Vec<T>, hi: Vec<T>) -> Result<Self> {
        if lo.is_empty() {
            return Err(Error::invalid("lo", "box dimension must be positive"));
        }
        check_input(lo.len(), &hi, "box bounds")?;
        check_input(lo.len(), &lo, "box bounds")?;
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::invalid("hi", "every upper bound must be >= its lower bound"));
        }
        Ok(Self { lo, hi })
    }

    pub fn uniform(dim: usize, lo: T, hi: T) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    /// The scalar interval `[lo, hi]`.
    pub fn interval(lo: T, hi: T) -> Result<Self> {
        Self::uniform(1, lo, hi)
    }

    pub fn lo(&self) -> &[T] {
        &self.lo
    }

    pub fn hi(&self) -> &[T] {
        &self.hi
    }
}

impl<T: Scalar> FeasibleSet<T> for BoxSet<T> {
    fn name(&self) -> &'static str {
        "box"
    }

    fn dim(&self) -> usize {
        self.lo.len()
    }

    fn lmo(&self, c: &[T]) -> Result<Vec<T>> {
        check_input(self.dim(), c, "lmo cost")?;
        if is_zero_cost(c) {
            return Ok(self.lo.clone());
        }
        Ok(c.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(&ci, (&l, &h))| if ci < T::zero() { h } else { l })
            .collect())
    }

    fn project(&self, p: &[T]) -> Result<Vec<T>> {
        check_input(self.dim(), p, "projection input")?;
        Ok(p.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(&v, (&l, &h))| v.max(l).min(h))
            .collect())
    }

    fn has_projection(&self) -> bool {
        true
    }

    fn violation(&self, p: &[T]) -> T {
        p.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .fold(T::zero(), |acc, (&v, (&l, &h))| acc.max(l - v).max(v - h))
    }

    fn diameter(&self) -> T {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&l, &h)| (h - l) * (h - l))
            .sum::<T>()
            .sqrt()
    }

    fn strong_convexity(&self) -> Option<T> {
        if self.dim() == 1 && self.hi[0] > self.lo[0] {
            Some(T::lit(2.0) / (self.hi[0] - self.lo[0]))
        } else {
            None
        }
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Vec<T> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&l, &h)| l + (h - l) * T::lit(uniform01(rng)))
            .collect()
    }
}
