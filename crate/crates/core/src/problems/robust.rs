use crate::error::{check_dim, Error, Result};
use crate::ingest::SparseDataset;
use crate::objective::{SaddleObjective, Smoothness};
use crate::scalar::Scalar;
use crate::sets::{ChiSquareBall, FeasibleSet, NuclearBall};

use super::{estimate_smoothness, LipschitzEstimate};

/// `log(1 + e^s)` without overflow.
pub fn softplus<T: Scalar>(s: T) -> T {
    if s > T::zero() {
        s + (-s).exp().ln_1p()
    } else {
        s.exp().ln_1p()
    }
}

/// `1 / (1 + e^-s)` without overflow.
pub fn logistic<T: Scalar>(s: T) -> T {
    if s >= T::zero() {
        T::one() / (T::one() + (-s).exp())
    } else {
        let e = s.exp();
        e / (T::one() + e)
    }
}

/// Margin `sum_{j != b} (theta_j - theta_b)' a` for a row-major `k x d` theta
/// and a sparse sample given as `(indices, values)`; `b` is one-based.
pub fn multiclass_margin<T: Scalar>(
    theta: &[T],
    k: usize,
    d: usize,
    indices: &[usize],
    values: &[T],
    b: usize,
) -> Result<T> {
    check_dim("theta", k * d, theta.len())?;
    if b == 0 || b > k {
        return Err(Error::invalid("label", format!("{b} is outside 1..={k}")));
    }
    if indices.iter().any(|&j| j >= d) {
        return Err(Error::invalid("sample", format!("feature index beyond dimension {d}")));
    }
    let row_dot = |c: usize| {
        let row = &theta[c * d..(c + 1) * d];
        indices
            .iter()
            .zip(values)
            .fold(T::zero(), |acc, (&j, &v)| acc + row[j] * v)
    };
    let own = row_dot(b - 1);
    Ok((0..k)
        .filter(|&c| c != b - 1)
        .fold(T::zero(), |acc, c| acc + (row_dot(c) - own)))
}

/// `softplus(sum_{j != b} (theta_j - theta_b)' a)`.
pub fn multiclass_loss<T: Scalar>(
    theta: &[T],
    k: usize,
    d: usize,
    indices: &[usize],
    values: &[T],
    b: usize,
) -> Result<T> {
    multiclass_margin(theta, k, d, indices, values, b).map(softplus)
}

/// `L(theta, y) = sum_i y_i loss_i(theta)` with `theta` in a nuclear-norm ball
/// of `k x d` matrices and `y` in a chi-square ball around the uniform weights.
#[derive(Debug, Clone)]
pub struct RobustMulticlass<T> {
    data: SparseDataset<T>,
    k: usize,
    smooth: Smoothness<T>,
}

impl<T: Scalar> RobustMulticlass<T> {
    /// `smoothness.l_yy` and `mu_tilde` must be zero: `L` is linear in `y`.
    pub fn new(data: SparseDataset<T>, smoothness: Smoothness<T>) -> Result<Self> {
        if data.is_empty() || data.dim() == 0 {
            return Err(Error::invalid("dataset", "needs at least one sample and feature"));
        }
        smoothness.validate()?;
        if smoothness.l_yy != T::zero() || smoothness.mu_tilde != T::zero() {
            return Err(Error::invalid("smoothness", "objective is linear in y"));
        }
        let k = data.num_classes();
        Ok(Self {
            data,
            k,
            smooth: smoothness,
        })
    }

    /// Builds the problem with `l_xx`, `l_yx` from sampled difference quotients.
    pub fn with_estimated_smoothness(
        data: SparseDataset<T>,
        x_set: &dyn FeasibleSet<T>,
        y_set: &dyn FeasibleSet<T>,
        samples: usize,
        seed: u64,
    ) -> Result<(Self, LipschitzEstimate<T>)> {
        let placeholder = Smoothness::new(T::one(), T::one(), T::zero(), T::zero())?;
        let mut p = Self::new(data, placeholder)?;
        let est = estimate_smoothness(&p, x_set, y_set, samples, seed)?;
        p.smooth = Smoothness::new(est.l_xx, est.l_yx.max(T::min_positive_value()), T::zero(), T::zero())?;
        Ok((p, est))
    }

    pub fn num_classes(&self) -> usize {
        self.k
    }

    pub fn num_features(&self) -> usize {
        self.data.dim()
    }

    pub fn num_samples(&self) -> usize {
        self.data.len()
    }

    pub fn dataset(&self) -> &SparseDataset<T> {
        &self.data
    }

    /// `X = {theta : ||theta||_* <= radius}` and `Y = {y : ||n y - 1||^2 <= rho}`.
    pub fn feasible_sets(&self, radius: T, rho: T) -> Result<(NuclearBall<T>, ChiSquareBall<T>)> {
        Ok((
            NuclearBall::new(self.k, self.num_features(), radius)?,
            ChiSquareBall::new(self.num_samples(), rho)?,
        ))
    }

    /// Margins `s_i` using `s_i = (sum_j theta_j - k theta_b)' a_i`.
    fn margins(&self, theta: &[T]) -> Vec<T> {
        let d = self.num_features();
        let mut total = vec![T::zero(); d];
        for c in 0..self.k {
            for (t, &v) in total.iter_mut().zip(&theta[c * d..(c + 1) * d]) {
                *t = *t + v;
            }
        }
        let kf = T::from_usize_lossy(self.k);
        (0..self.num_samples())
            .map(|i| {
                let b = self.data.labels[i] - 1;
                let own = self.data.features.row_dot(i, &theta[b * d..(b + 1) * d]);
                self.data.features.row_dot(i, &total) - kf * own
            })
            .collect()
    }

    /// Per-sample losses; this is `grad_y L`.
    pub fn losses(&self, theta: &[T]) -> Vec<T> {
        self.margins(theta).into_iter().map(softplus).collect()
    }
}

impl<T: Scalar> SaddleObjective<T> for RobustMulticlass<T> {
    fn dim_x(&self) -> usize {
        self.k * self.num_features()
    }

    fn dim_y(&self) -> usize {
        self.num_samples()
    }

    fn value(&self, x: &[T], y: &[T]) -> T {
        self.losses(x).into_iter().zip(y).map(|(l, &w)| w * l).sum()
    }

    fn grad_x(&self, x: &[T], y: &[T]) -> Vec<T> {
        let d = self.num_features();
        let kf = T::from_usize_lossy(self.k);
        let mut g = vec![T::zero(); x.len()];
        // Sum over rows of w a, then the label row is corrected by -k w a.
        let mut shared = vec![T::zero(); d];
        for (i, s) in self.margins(x).into_iter().enumerate() {
            let w = y[i] * logistic(s);
            if w == T::zero() {
                continue;
            }
            let b = self.data.labels[i] - 1;
            let (idx, val) = self.data.features.row(i);
            for (&j, &v) in idx.iter().zip(val) {
                shared[j] = shared[j] + w * v;
                g[b * d + j] = g[b * d + j] - kf * w * v;
            }
        }
        for c in 0..self.k {
            for (gj, &sj) in g[c * d..(c + 1) * d].iter_mut().zip(&shared) {
                *gj = *gj + sj;
            }
        }
        g
    }

    fn grad_y(&self, x: &[T], _y: &[T]) -> Vec<T> {
        self.losses(x)
    }

    fn smoothness(&self) -> Smoothness<T> {
        self.smooth
    }
}
