//! Saddle objectives `L(x, y)` and the dual-regularized objective
//! `L_mu(x, y) = L(x, y) - mu/2 ||y - y0||^2`.

use crate::error::{check_dim, Error, Result};
use crate::linalg::{dist, ensure_finite};
use crate::scalar::Scalar;

/// Lipschitz constants of the partial gradients and the strong-concavity
/// modulus in `y`. Always caller-supplied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Smoothness<T> {
    pub l_xx: T,
    pub l_yx: T,
    pub l_yy: T,
    /// 0 means merely concave.
    pub mu_tilde: T,
}

impl<T: Scalar> Smoothness<T> {
    pub fn new(l_xx: T, l_yx: T, l_yy: T, mu_tilde: T) -> Result<Self> {
        let s = Self {
            l_xx,
            l_yx,
            l_yy,
            mu_tilde,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.l_xx, self.l_yx, self.l_yy, self.mu_tilde];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("smoothness constants"));
        }
        if !(self.l_yx > T::zero()) {
            return Err(Error::invalid("l_yx", "must be strictly positive"));
        }
        if self.l_xx < T::zero() || self.l_yy < T::zero() || self.mu_tilde < T::zero() {
            return Err(Error::invalid(
                "smoothness",
                "l_xx, l_yy and mu_tilde must be nonnegative",
            ));
        }
        Ok(())
    }
}

/// A smooth objective, possibly nonconvex in `x` and concave in `y`.
///
/// Implementations are immutable after construction; every method is a pure
/// function of its arguments.
pub trait SaddleObjective<T: Scalar>: Send + Sync {
    fn dim_x(&self) -> usize;
    fn dim_y(&self) -> usize;
    fn value(&self, x: &[T], y: &[T]) -> T;
    fn grad_x(&self, x: &[T], y: &[T]) -> Vec<T>;
    fn grad_y(&self, x: &[T], y: &[T]) -> Vec<T>;
    fn smoothness(&self) -> Smoothness<T>;

    /// Constraint violation for problems that carry a relaxed constraint.
    fn infeasibility(&self, _x: &[T]) -> Option<T> {
        None
    }

    fn check_dims(&self, x: &[T], y: &[T]) -> Result<()> {
        check_dim("primal point", self.dim_x(), x.len())?;
        check_dim("dual point", self.dim_y(), y.len())
    }
}

impl<T: Scalar, O: SaddleObjective<T> + ?Sized> SaddleObjective<T> for &O {
    fn dim_x(&self) -> usize {
        (**self).dim_x()
    }
    fn dim_y(&self) -> usize {
        (**self).dim_y()
    }
    fn value(&self, x: &[T], y: &[T]) -> T {
        (**self).value(x, y)
    }
    fn grad_x(&self, x: &[T], y: &[T]) -> Vec<T> {
        (**self).grad_x(x, y)
    }
    fn grad_y(&self, x: &[T], y: &[T]) -> Vec<T> {
        (**self).grad_y(x, y)
    }
    fn smoothness(&self) -> Smoothness<T> {
        (**self).smoothness()
    }
    fn infeasibility(&self, x: &[T]) -> Option<T> {
        (**self).infeasibility(x)
    }
}

/// Gradient of `x -> L(x, y)` and `y -> L(x, y)` at one point, with dimension
/// and finiteness checks.
pub fn checked_grads<T: Scalar, O: SaddleObjective<T> + ?Sized>(obj: &O, x: &[T], y: &[T]) -> Result<(Vec<T>, Vec<T>)> {
    obj.check_dims(x, y)?;
    let gx = obj.grad_x(x, y);
    ensure_finite(&gx, "primal gradient")?;
    let gy = obj.grad_y(x, y);
    ensure_finite(&gy, "dual gradient")?;
    Ok((gx, gy))
}

/// `L_mu(x, y) = L(x, y) - mu/2 ||y - y0||^2`.
#[derive(Debug, Clone)]
pub struct Regularized<O, T> {
    pub base: O,
    pub mu: T,
    pub anchor: Vec<T>,
}

impl<T: Scalar, O: SaddleObjective<T>> Regularized<O, T> {
    pub fn new(base: O, mu: T, anchor: Vec<T>) -> Result<Self> {
        if !(mu >= T::zero()) || !mu.is_finite() {
            return Err(Error::invalid("mu", "must be finite and nonnegative"));
        }
        check_dim("regularization anchor", base.dim_y(), anchor.len())?;
        ensure_finite(&anchor, "regularization anchor")?;
        Ok(Self { base, mu, anchor })
    }

    pub fn value(&self, x: &[T], y: &[T]) -> T {
        let v = self.base.value(x, y);
        if self.mu == T::zero() {
            return v;
        }
        let d = dist(y, &self.anchor);
        v - self.mu * T::lit(0.5) * d * d
    }

    pub fn grad_x(&self, x: &[T], y: &[T]) -> Vec<T> {
        self.base.grad_x(x, y)
    }

    /// `grad_y L(x, y) - mu (y - y0)`.
    pub fn grad_y(&self, x: &[T], y: &[T]) -> Result<Vec<T>> {
        self.base.check_dims(x, y)?;
        let g = self.base.grad_y(x, y);
        ensure_finite(&g, "dual gradient")?;
        Ok(regularize_dual_grad(g, self.mu, y, &self.anchor))
    }
}

/// Applies the anchor term in place: `g - mu (y - y0)`. Returns `g` untouched
/// when `mu == 0`.
pub fn regularize_dual_grad<T: Scalar>(mut g: Vec<T>, mu: T, y: &[T], anchor: &[T]) -> Vec<T> {
    if mu == T::zero() {
        return g;
    }
    for ((gi, &yi), &ai) in g.iter_mut().zip(y).zip(anchor) {
        *gi = *gi - mu * (yi - ai);
    }
    g
}
