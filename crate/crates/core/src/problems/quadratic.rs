use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{dist, dot, spectral_norm, Mat};
use crate::objective::{SaddleObjective, Smoothness};
use crate::scalar::Scalar;
use crate::sets::FeasibleSet;

/// `L(x, y) = 1/2 x'Qx + x'Ay + b'y - mu_tilde/2 ||y||^2` with `Q` symmetric,
/// possibly indefinite.
#[derive(Debug, Clone)]
pub struct QuadraticSaddle<T> {
    q: Mat<T>,
    a: Mat<T>,
    b: Vec<T>,
    mu_tilde: T,
    smooth: Smoothness<T>,
}

impl<T: Scalar> QuadraticSaddle<T> {
    pub fn new(q: Mat<T>, a: Mat<T>, b: Vec<T>, mu_tilde: T) -> Result<Self> {
        check_dim("Q columns", q.rows, q.cols)?;
        check_dim("coupling rows", q.rows, a.rows)?;
        check_dim("linear term", a.cols, b.len())?;
        let scale = q.frobenius().max(T::one());
        for i in 0..q.rows {
            for j in 0..i {
                if (q.get(i, j) - q.get(j, i)).abs() > T::tol_floor(1e-12) * scale {
                    return Err(Error::invalid("Q", "must be symmetric"));
                }
            }
        }
        let smooth = Smoothness::new(spectral_norm(&q), spectral_norm(&a), mu_tilde, mu_tilde)?;
        Ok(Self {
            q,
            a,
            b,
            mu_tilde,
            smooth,
        })
    }

    /// Random instance: `Q` has eigenvalues spread over `[-1, 1]` (indefinite),
    /// `A` is Gaussian scaled to spectral norm 1 and `b` is small.
    pub fn random(dim_x: usize, dim_y: usize, mu_tilde: T, seed: u64) -> Result<Self> {
        if dim_x == 0 || dim_y == 0 {
            return Err(Error::invalid("dimension", "must be positive"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Mat::<T>::gaussian(dim_x, dim_x, &mut rng);
        let basis = crate::linalg::svd(&g).u;
        let mut q = Mat::zeros(dim_x, dim_x);
        for k in 0..dim_x {
            let lam = if dim_x == 1 {
                -T::one()
            } else {
                T::lit(-1.0 + 2.0 * k as f64 / (dim_x - 1) as f64)
            };
            for i in 0..dim_x {
                for j in 0..dim_x {
                    let v = q.get(i, j) + lam * basis.get(i, k) * basis.get(j, k);
                    q.set(i, j, v);
                }
            }
        }
        for i in 0..dim_x {
            for j in 0..i {
                let v = T::lit(0.5) * (q.get(i, j) + q.get(j, i));
                q.set(i, j, v);
                q.set(j, i, v);
            }
        }
        let mut a = Mat::<T>::gaussian(dim_x, dim_y, &mut rng);
        let s = spectral_norm(&a);
        a.data.iter_mut().for_each(|v| *v = *v / s);
        let b = (0..dim_y)
            .map(|_| T::lit(0.1 * rng.sample::<f64, _>(StandardNormal)))
            .collect();
        Self::new(q, a, b, mu_tilde)
    }

    pub fn q(&self) -> &Mat<T> {
        &self.q
    }

    pub fn coupling(&self) -> &Mat<T> {
        &self.a
    }

    pub fn mu_tilde(&self) -> T {
        self.mu_tilde
    }

    /// Maximizer of `L_mu(x, .) = L(x, .) - mu/2 ||. - y0||^2` over `Y`.
    ///
    /// The Hessian in `y` is `-(mu_tilde + mu) I`, so the maximizer is the
    /// projection of the unconstrained one for every convex `Y` with a PO.
    pub fn y_star(&self, x: &[T], mu: T, anchor: &[T], y_set: &dyn FeasibleSet<T>) -> Result<Vec<T>> {
        check_dim("primal point", self.q.rows, x.len())?;
        check_dim("regularization anchor", self.b.len(), anchor.len())?;
        let curv = self.mu_tilde + mu;
        if !(curv > T::zero()) {
            return Err(Error::invalid("mu", "mu_tilde + mu must be positive"));
        }
        let atx = self.a.t_mul_vec(x);
        let free: Vec<T> = atx
            .iter()
            .zip(&self.b)
            .zip(anchor)
            .map(|((&u, &b), &a0)| (u + b + mu * a0) / curv)
            .collect();
        y_set.project(&free)
    }

    /// `f_mu(x) = max_{y in Y} L_mu(x, y)`.
    pub fn f_mu(&self, x: &[T], mu: T, anchor: &[T], y_set: &dyn FeasibleSet<T>) -> Result<T> {
        let y = self.y_star(x, mu, anchor, y_set)?;
        let d = dist(&y, anchor);
        Ok(self.value(x, &y) - T::lit(0.5) * mu * d * d)
    }

    /// `grad f_mu(x) = grad_x L(x, y*_mu(x))`.
    pub fn danskin_grad(&self, x: &[T], mu: T, anchor: &[T], y_set: &dyn FeasibleSet<T>) -> Result<Vec<T>> {
        let y = self.y_star(x, mu, anchor, y_set)?;
        Ok(self.grad_x(x, &y))
    }
}

impl<T: Scalar> SaddleObjective<T> for QuadraticSaddle<T> {
    fn dim_x(&self) -> usize {
        self.q.rows
    }

    fn dim_y(&self) -> usize {
        self.b.len()
    }

    fn value(&self, x: &[T], y: &[T]) -> T {
        let qx = self.q.mul_vec(x);
        let ay = self.a.mul_vec(y);
        T::lit(0.5) * dot(x, &qx) + dot(x, &ay) + dot(&self.b, y) - T::lit(0.5) * self.mu_tilde * dot(y, y)
    }

    fn grad_x(&self, x: &[T], y: &[T]) -> Vec<T> {
        let mut g = self.q.mul_vec(x);
        for (gi, ai) in g.iter_mut().zip(self.a.mul_vec(y)) {
            *gi = *gi + ai;
        }
        g
    }

    fn grad_y(&self, x: &[T], y: &[T]) -> Vec<T> {
        let atx = self.a.t_mul_vec(x);
        atx.iter()
            .zip(&self.b)
            .zip(y)
            .map(|((&u, &b), &yi)| u + b - self.mu_tilde * yi)
            .collect()
    }

    fn smoothness(&self) -> Smoothness<T> {
        self.smooth
    }
}
