//! Dense linear-algebra kernels used by the oracles and problems.
//!
//! Vectors are plain slices. Matrices are row-major [`Mat`] values; a matrix
//! block inside a flat point is viewed by copying into a `Mat` or by indexing
//! directly with the recorded shape.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[inline]
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

#[inline]
pub fn norm<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

pub fn dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y))
        .sqrt()
}

pub fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn scale<T: Scalar>(a: &[T], s: T) -> Vec<T> {
    a.iter().map(|&x| x * s).collect()
}

/// `y += alpha * x`
pub fn axpy<T: Scalar>(alpha: T, x: &[T], y: &mut [T]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi = *yi + alpha * xi;
    }
}

/// `x <- step * target + (1 - step) * x`
pub fn convex_step<T: Scalar>(x: &mut [T], target: &[T], step: T) {
    debug_assert_eq!(x.len(), target.len());
    let keep = T::one() - step;
    for (xi, &ti) in x.iter_mut().zip(target) {
        *xi = step * ti + keep * *xi;
    }
}

pub fn all_finite<T: Scalar>(a: &[T]) -> bool {
    a.iter().all(|v| v.is_finite())
}

pub(crate) fn ensure_finite<T: Scalar>(a: &[T], what: &'static str) -> Result<()> {
    if all_finite(a) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix data",
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    /// Matrix with i.i.d. standard normal entries.
    pub fn gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols)
            .map(|_| T::lit(rng.sample::<f64, _>(StandardNormal)))
            .collect();
        Self { rows, cols, data }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn frobenius_sq(&self) -> T {
        dot(&self.data, &self.data)
    }

    pub fn frobenius(&self) -> T {
        self.frobenius_sq().sqrt()
    }

    /// `self * other`
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == T::zero() {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o = *o + a * b;
                }
            }
        }
        out
    }

    /// `self^T * other`
    pub fn t_matmul(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "t_matmul shape");
        let mut out = Self::zeros(self.cols, other.cols);
        for k in 0..self.rows {
            let a_row = self.row(k);
            let b_row = other.row(k);
            for (i, &a) in a_row.iter().enumerate() {
                if a == T::zero() {
                    continue;
                }
                let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o = *o + a * b;
                }
            }
        }
        out
    }

    /// `self * other^T`
    pub fn matmul_t(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "matmul_t shape");
        let mut out = Self::zeros(self.rows, other.rows);
        for i in 0..self.rows {
            for j in 0..other.rows {
                out.data[i * other.rows + j] = dot(self.row(i), other.row(j));
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn t_mul_vec(&self, v: &[T]) -> Vec<T> {
        debug_assert_eq!(v.len(), self.rows);
        let mut out = vec![T::zero(); self.cols];
        for (i, &vi) in v.iter().enumerate() {
            if vi != T::zero() {
                axpy(vi, self.row(i), &mut out);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: sub(&self.data, &other.data),
        }
    }
}

/// Thin singular value decomposition `A = U diag(s) V^T`.
#[derive(Debug, Clone)]
pub struct Svd<T> {
    /// `rows x r`
    pub u: Mat<T>,
    /// `r` singular values, descending
    pub s: Vec<T>,
    /// `cols x r`
    pub v: Mat<T>,
}

impl<T: Scalar> Svd<T> {
    pub fn reconstruct_with(&self, s: &[T]) -> Mat<T> {
        let r = s.len();
        let mut us = self.u.clone();
        for i in 0..us.rows {
            for (j, &sj) in s.iter().enumerate().take(r) {
                let v = us.get(i, j) * sj;
                us.set(i, j, v);
            }
        }
        us.matmul_t(&self.v)
    }
}

const JACOBI_MAX_SWEEPS: usize = 60;

/// One-sided Jacobi SVD. Works on the orientation with more rows than columns.
pub fn svd<T: Scalar>(a: &Mat<T>) -> Svd<T> {
    if a.rows < a.cols {
        let t = svd_tall(&a.transpose());
        return Svd { u: t.v, s: t.s, v: t.u };
    }
    svd_tall(a)
}

fn svd_tall<T: Scalar>(a: &Mat<T>) -> Svd<T> {
    let (m, n) = (a.rows, a.cols);
    // Columns of `w` are rotated until mutually orthogonal; `v` accumulates rotations.
    // Column-major copies keep the inner loops contiguous.
    let mut w: Vec<Vec<T>> = (0..n).map(|j| (0..m).map(|i| a.get(i, j)).collect()).collect();
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    let eps = T::epsilon();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = dot(&w[p], &w[p]);
                let beta = dot(&w[q], &w[q]);
                let gamma = dot(&w[p], &w[q]);
                if gamma == T::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let (lo, hi) = w.split_at_mut(q);
                rotate(&mut lo[p], &mut hi[0], c, s);
                let (lo, hi) = v.split_at_mut(q);
                rotate(&mut lo[p], &mut hi[0], c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<(usize, T)> = w.iter().map(|col| norm(col)).enumerate().collect();
    order.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal));
    let mut u = Mat::zeros(m, n);
    let mut vm = Mat::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    for (out_j, &(j, sigma)) in order.iter().enumerate() {
        s.push(sigma);
        for (i, &wi) in w[j].iter().enumerate().take(m) {
            let val = if sigma > T::zero() { wi / sigma } else { T::zero() };
            u.set(i, out_j, val);
        }
        for (i, &vi) in v[j].iter().enumerate().take(n) {
            vm.set(i, out_j, vi);
        }
    }
    Svd { u, s, v: vm }
}

#[inline]
fn rotate<T: Scalar>(a: &mut [T], b: &mut [T], c: T, s: T) {
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let (xa, yb) = (*x, *y);
        *x = c * xa - s * yb;
        *y = s * xa + c * yb;
    }
}

pub fn singular_values<T: Scalar>(a: &Mat<T>) -> Vec<T> {
    svd(a).s
}

pub fn nuclear_norm<T: Scalar>(a: &Mat<T>) -> T {
    singular_values(a).into_iter().sum()
}

pub fn spectral_norm<T: Scalar>(a: &Mat<T>) -> T {
    singular_values(a).first().copied().unwrap_or_else(T::zero)
}

/// Settings for [`top_singular_pair`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIteration {
    /// Relative Rayleigh-quotient residual `||G v - lambda v|| / lambda` at which to stop.
    pub tol: f64,
    /// Iteration cap; `None` means `10 * (rows + cols)`.
    pub max_iter: Option<usize>,
}

impl Default for PowerIteration {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: None,
        }
    }
}

/// Leading singular triple found by power iteration.
#[derive(Debug, Clone)]
pub struct TopPair<T> {
    pub sigma: T,
    pub u: Vec<T>,
    pub v: Vec<T>,
    pub iterations: usize,
    pub residual: T,
}

/// FNV-1a over the bit patterns of the entries.
pub fn hash_entries<T: Scalar>(data: &[T]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in data {
        for byte in v.as_f64().to_bits().to_le_bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

/// Top singular pair of `a`.
///
/// Runs Lanczos with full reorthogonalization on the smaller of `A A^T` and
/// `A^T A`, i.e. power iteration with the whole Krylov subspace kept. The
/// start vector is seeded from a hash of the entries, so the result is a pure
/// function of `a`. Each step reports the relative Ritz residual
/// `||G v - lambda v|| / lambda`; the run stops once it is below `opts.tol`.
///
/// Returns `Ok(None)` when `a` is zero.
pub fn top_singular_pair<T: Scalar>(a: &Mat<T>, opts: PowerIteration) -> Result<Option<TopPair<T>>> {
    let (m, n) = (a.rows, a.cols);
    if a.data.iter().all(|&x| x == T::zero()) {
        return Ok(None);
    }
    let wide = m <= n;
    let side = if wide { m } else { n };
    // G = A A^T on the row side, A^T A on the column side.
    let apply = |x: &[T]| -> Vec<T> {
        if wide {
            a.mul_vec(&a.t_mul_vec(x))
        } else {
            a.t_mul_vec(&a.mul_vec(x))
        }
    };
    let cap = opts.max_iter.unwrap_or(10 * (m + n)).max(1);
    let tol = T::tol_floor(opts.tol);
    let mut rng = ChaCha8Rng::seed_from_u64(hash_entries(&a.data));
    let mut q: Vec<T> = (0..side)
        .map(|_| T::lit(rng.sample::<f64, _>(StandardNormal)))
        .collect();
    let nq = norm(&q);
    q.iter_mut().for_each(|x| *x = *x / nq);

    let mut basis: Vec<Vec<T>> = Vec::new();
    let mut alphas: Vec<T> = Vec::new();
    let mut betas: Vec<T> = Vec::new();
    let mut residual = T::infinity();
    for it in 1..=cap.min(side) {
        let mut w = apply(&q);
        let alpha = dot(&q, &w);
        axpy(-alpha, &q, &mut w);
        if let (Some(prev), Some(&beta)) = (basis.last(), betas.last()) {
            axpy(-beta, prev, &mut w);
        }
        basis.push(q);
        alphas.push(alpha);
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                axpy(-c, b, &mut w);
            }
        }
        let beta = norm(&w);
        let (theta, ritz) = top_eigenpair_tridiagonal(&alphas, &betas);
        if theta <= T::min_positive_value() {
            return Ok(None);
        }
        residual = (beta * ritz[it - 1]).abs() / theta;
        let exhausted = beta <= T::epsilon() * theta || it == side;
        if residual <= tol || exhausted {
            let mut y = vec![T::zero(); side];
            for (b, &c) in basis.iter().zip(&ritz) {
                axpy(c, b, &mut y);
            }
            let ny = norm(&y);
            y.iter_mut().for_each(|x| *x = *x / ny);
            let other = if wide { a.t_mul_vec(&y) } else { a.mul_vec(&y) };
            let sigma = norm(&other);
            if sigma <= T::min_positive_value() {
                return Ok(None);
            }
            let other: Vec<T> = other.iter().map(|&x| x / sigma).collect();
            let (u, v) = if wide { (y, other) } else { (other, y) };
            return Ok(Some(TopPair {
                sigma,
                u,
                v,
                iterations: it,
                residual: residual.min(beta.abs() / theta),
            }));
        }
        betas.push(beta);
        q = w.iter().map(|&x| x / beta).collect();
    }
    Err(Error::PowerIterationStalled {
        iterations: cap.min(side),
        residual: residual.as_f64(),
    })
}

/// Largest eigenpair of the symmetric PSD tridiagonal matrix with diagonal
/// `alphas` and off-diagonal `betas`.
fn top_eigenpair_tridiagonal<T: Scalar>(alphas: &[T], betas: &[T]) -> (T, Vec<T>) {
    let j = alphas.len();
    let mut t = Mat::zeros(j, j);
    for i in 0..j {
        t.set(i, i, alphas[i]);
        if i + 1 < j {
            t.set(i, i + 1, betas[i]);
            t.set(i + 1, i, betas[i]);
        }
    }
    // For a PSD matrix the SVD is the eigendecomposition.
    let dec = svd(&t);
    let vec = (0..j).map(|i| dec.u.get(i, 0)).collect();
    (dec.s[0], vec)
}

/// Euclidean projection onto `{w : w >= 0, sum w = radius}` (sort-based).
pub fn project_simplex<T: Scalar>(p: &[T], radius: T) -> Vec<T> {
    if p.is_empty() {
        return Vec::new();
    }
    let mut sorted = p.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    let mut cumsum = T::zero();
    let mut theta = T::zero();
    for (i, &u) in sorted.iter().enumerate() {
        cumsum = cumsum + u;
        let t = (cumsum - radius) / T::from_usize_lossy(i + 1);
        if u - t > T::zero() {
            theta = t;
        }
    }
    p.iter().map(|&x| (x - theta).max(T::zero())).collect()
}

/// Euclidean projection of a nonnegative vector onto `{w >= 0, sum w <= radius}`.
pub fn project_capped_nonneg<T: Scalar>(p: &[T], radius: T) -> Vec<T> {
    let clipped: Vec<T> = p.iter().map(|&x| x.max(T::zero())).collect();
    if clipped.iter().copied().sum::<T>() <= radius {
        clipped
    } else {
        project_simplex(&clipped, radius)
    }
}
