use rand::RngCore;

use super::{check_input, is_zero_cost, uniform01, FeasibleSet};
use crate::error::{Error, Result};
use crate::linalg::project_simplex;
use crate::scalar::Scalar;

/// Probability simplex `{p >= 0, sum p = 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Simplex {
    dim: usize,
}

impl Simplex {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dim", "simplex dimension must be positive"));
        }
        Ok(Self { dim })
    }
}

impl<T: Scalar> FeasibleSet<T> for Simplex {
    fn name(&self) -> &'static str {
        "simplex"
    }

    fn dim(&self) -> usize {
        self.dim
    }

    /// Vertex at the smallest cost; ties go to the lowest index.
    fn lmo(&self, c: &[T]) -> Result<Vec<T>> {
        check_input(self.dim, c, "lmo cost")?;
        let mut best = 0;
        if !is_zero_cost(c) {
            for (i, &v) in c.iter().enumerate() {
                if v < c[best] {
                    best = i;
                }
            }
        }
        let mut out = vec![T::zero(); self.dim];
        out[best] = T::one();
        Ok(out)
    }

    fn project(&self, p: &[T]) -> Result<Vec<T>> {
        check_input(self.dim, p, "projection input")?;
        Ok(project_simplex(p, T::one()))
    }

    fn has_projection(&self) -> bool {
        true
    }

    fn violation(&self, p: &[T]) -> T {
        let neg = p.iter().fold(T::zero(), |acc, &v| acc.max(-v));
        let sum: T = p.iter().copied().sum();
        neg.max((sum - T::one()).abs())
    }

    fn diameter(&self) -> T {
        if self.dim > 1 {
            T::lit(2.0).sqrt()
        } else {
            T::zero()
        }
    }

    /// Uniform (flat Dirichlet) draw.
    fn sample(&self, rng: &mut dyn RngCore) -> Vec<T> {
        let e: Vec<f64> = (0..self.dim).map(|_| -(1.0 - uniform01(rng)).ln()).collect();
        let s: f64 = e.iter().sum();
        e.into_iter().map(|v| T::lit(v / s)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::*;
    use crate::linalg::dist;

    #[test]
    fn lmo_minimizing_vertex() {
        let s = Simplex::new(3).unwrap();
        assert_eq!(s.lmo(&[3.0, 1.0, 2.0]).unwrap(), vec![0.0, 1.0, 0.0]);
        assert_eq!(s.lmo(&[0.0f64, 0.0, 0.0]).unwrap(), vec![1.0, 0.0, 0.0]);
    }

    /// Brute-force oracle: the nearest point on a fine grid of the face
    /// `{(a, 1 - a, 0)}` and of the whole simplex.
    #[test]
    fn projection_matches_grid_search() {
        let s = Simplex::new(3).unwrap();
        let p = [1.0, 1.0, 0.0];
        let steps = 400;
        let mut best = (f64::INFINITY, vec![0.0; 3]);
        for i in 0..=steps {
            for j in 0..=(steps - i) {
                let q = vec![
                    i as f64 / steps as f64,
                    j as f64 / steps as f64,
                    (steps - i - j) as f64 / steps as f64,
                ];
                let d = dist(&p, &q);
                if d < best.0 {
                    best = (d, q);
                }
            }
        }
        assert_eq!(best.1, vec![0.5, 0.5, 0.0]);
        let proj = s.project(&p).unwrap();
        assert!(dist(&proj, &best.1) < 1e-12);
    }

    #[test]
    fn properties() {
        let s = Simplex::new(5).unwrap();
        check_lmo_optimality::<Simplex>(&s, 1000, 21);
        check_projection::<Simplex>(&s, 1000, 22);
        check_diameter::<Simplex>(&s, 500, 23);
    }
}
