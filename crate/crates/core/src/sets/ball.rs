use rand::RngCore;

use super::{check_input, gaussian, is_zero_cost, uniform01, FeasibleSet};
use crate::error::{Error, Result};
use crate::linalg::{dist, norm};
use crate::scalar::Scalar;

/// Euclidean ball `{p : ||p - center|| <= radius}`; strongly convex with
/// modulus `1 / radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct L2Ball<T> {
    center: Vec<T>,
    radius: T,
}

impl<T: Scalar> L2Ball<T> {
    pub fn new(center: Vec<T>, radius: T) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::invalid("center", "ball dimension must be positive"));
        }
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::invalid("radius", "must be finite and positive"));
        }
        check_input(center.len(), &center, "ball center")?;
        Ok(Self { center, radius })
    }

    pub fn centered(dim: usize, radius: T) -> Result<Self> {
        Self::new(vec![T::zero(); dim], radius)
    }

    pub fn center(&self) -> &[T] {
        &self.center
    }

    pub fn radius(&self) -> T {
        self.radius
    }
}

impl<T: Scalar> FeasibleSet<T> for L2Ball<T> {
    fn name(&self) -> &'static str {
        "l2 ball"
    }

    fn dim(&self) -> usize {
        self.center.len()
    }

    fn lmo(&self, c: &[T]) -> Result<Vec<T>> {
        check_input(self.dim(), c, "lmo cost")?;
        if is_zero_cost(c) {
            return Ok(self.center.clone());
        }
        let s = self.radius / norm(c);
        Ok(self.center.iter().zip(c).map(|(&o, &ci)| o - s * ci).collect())
    }

    fn project(&self, p: &[T]) -> Result<Vec<T>> {
        check_input(self.dim(), p, "projection input")?;
        let d = dist(p, &self.center);
        if d <= self.radius {
            return Ok(p.to_vec());
        }
        let s = self.radius / d;
        Ok(self.center.iter().zip(p).map(|(&o, &pi)| o + s * (pi - o)).collect())
    }

    fn has_projection(&self) -> bool {
        true
    }

    fn violation(&self, p: &[T]) -> T {
        (dist(p, &self.center) - self.radius).max(T::zero())
    }

    fn diameter(&self) -> T {
        T::lit(2.0) * self.radius
    }

    fn strong_convexity(&self) -> Option<T> {
        Some(T::one() / self.radius)
    }

    /// Uniform in volume, except one draw in four lands on the sphere.
    fn sample(&self, rng: &mut dyn RngCore) -> Vec<T> {
        let d = self.dim();
        let dir: Vec<f64> = (0..d).map(|_| gaussian(rng)).collect();
        let n = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
        let on_sphere = uniform01(rng) < 0.25;
        let rad = if on_sphere {
            1.0
        } else {
            uniform01(rng).powf(1.0 / d as f64)
        };
        let r = self.radius.as_f64() * rad / n;
        self.center.iter().zip(&dir).map(|(&o, &v)| o + T::lit(r * v)).collect()
    }
}

/// Pearson chi-square ambiguity set `{y : ||n y - 1||^2 <= rho}` around the
/// uniform distribution: the ball of radius `sqrt(rho)/n` centered at `1/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquareBall<T> {
    ball: L2Ball<T>,
    rho: T,
}

impl<T: Scalar> ChiSquareBall<T> {
    pub fn new(n: usize, rho: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "must be positive"));
        }
        if !(rho > T::zero()) || !rho.is_finite() {
            return Err(Error::invalid("rho", "must be finite and positive"));
        }
        let nf = T::from_usize_lossy(n);
        let ball = L2Ball::new(vec![T::one() / nf; n], rho.sqrt() / nf)?;
        Ok(Self { ball, rho })
    }

    pub fn rho(&self) -> T {
        self.rho
    }

    /// `||n y - 1||^2`
    pub fn divergence(&self, y: &[T]) -> T {
        let nf = T::from_usize_lossy(self.ball.dim());
        y.iter()
            .map(|&v| {
                let t = nf * v - T::one();
                t * t
            })
            .sum()
    }

    pub fn as_ball(&self) -> &L2Ball<T> {
        &self.ball
    }
}

impl<T: Scalar> FeasibleSet<T> for ChiSquareBall<T> {
    fn name(&self) -> &'static str {
        "chi-square ball"
    }
    fn dim(&self) -> usize {
        self.ball.dim()
    }
    fn lmo(&self, c: &[T]) -> Result<Vec<T>> {
        self.ball.lmo(c)
    }
    fn project(&self, p: &[T]) -> Result<Vec<T>> {
        self.ball.project(p)
    }
    fn has_projection(&self) -> bool {
        true
    }
    fn violation(&self, p: &[T]) -> T {
        self.ball.violation(p)
    }
    fn diameter(&self) -> T {
        self.ball.diameter()
    }
    fn strong_convexity(&self) -> Option<T> {
        self.ball.strong_convexity()
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Vec<T> {
        self.ball.sample(rng)
    }
}
