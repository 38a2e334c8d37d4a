use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{spectral_norm, Mat};
use crate::objective::{SaddleObjective, Smoothness};
use crate::scalar::Scalar;
use crate::sets::{BoxSet, FeasibleSet, L2Ball, NuclearBall, ProductSet};

/// Sizes of the synthetic dictionary-learning instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DictionaryDims {
    /// Signal dimension.
    pub m: usize,
    /// Old samples.
    pub n: usize,
    /// Old dictionary atoms.
    pub p: usize,
    /// Rank of the old coefficients.
    pub l: usize,
    /// New dictionary atoms, `q >= p`.
    pub q: usize,
    /// New samples.
    pub n_prime: usize,
}

impl DictionaryDims {
    pub const FULL: Self = Self {
        m: 100,
        n: 500,
        p: 50,
        l: 5,
        q: 60,
        n_prime: 1000,
    };

    pub const DESK: Self = Self {
        m: 20,
        n: 100,
        p: 10,
        l: 3,
        q: 12,
        n_prime: 100,
    };

    fn validate(&self) -> Result<()> {
        let all = [self.m, self.n, self.p, self.l, self.q, self.n_prime];
        if all.contains(&0) {
            return Err(Error::invalid("dims", "all dimensions must be positive"));
        }
        if self.p > self.q {
            return Err(Error::invalid("q", "must be at least p"));
        }
        Ok(())
    }
}

/// Generated matrices and the common starting point.
#[derive(Debug, Clone, PartialEq)]
pub struct DictionaryData<T> {
    pub dims: DictionaryDims,
    /// `m x n`, `A = D C`.
    pub a: Mat<T>,
    /// `q x n`, `C` followed by `q - p` zero rows.
    pub c_tilde: Mat<T>,
    /// `m x n'`.
    pub a_prime: Mat<T>,
    /// `m x q` starting dictionary with unit columns.
    pub d0: Mat<T>,
    /// `q x n'` zero starting coefficients.
    pub c0: Mat<T>,
}

fn normalize_columns<T: Scalar>(m: &mut Mat<T>) {
    for j in 0..m.cols {
        let len = (0..m.rows).map(|i| m.get(i, j).powi(2)).sum::<T>().sqrt();
        if len > T::zero() {
            for i in 0..m.rows {
                let v = m.get(i, j) / len;
                m.set(i, j, v);
            }
        }
    }
}

/// Gaussian `D` with unit columns, `C = U V' / (||U||_2 ||V||_2)` with Gaussian
/// `U` (`p x l`) and `V` (`n x l`), `A = D C`, Gaussian `A'`. The starting
/// dictionary is uniform on `[0, 0.1]` with unit columns.
pub fn generate_dictionary_dataset<T: Scalar>(dims: DictionaryDims, seed: u64) -> Result<DictionaryData<T>> {
    dims.validate()?;
    let DictionaryDims { m, n, p, l, q, n_prime } = dims;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = Mat::<T>::gaussian(m, p, &mut rng);
    normalize_columns(&mut d);
    let u = Mat::<T>::gaussian(p, l, &mut rng);
    let v = Mat::<T>::gaussian(n, l, &mut rng);
    let scale = spectral_norm(&u) * spectral_norm(&v);
    let mut c = u.matmul_t(&v);
    c.data.iter_mut().for_each(|x| *x = *x / scale);
    let a = d.matmul(&c);
    let mut c_tilde = Mat::zeros(q, n);
    c_tilde.data[..p * n].copy_from_slice(&c.data);
    let a_prime = Mat::<T>::gaussian(m, n_prime, &mut rng);
    let mut d0 = Mat::from_vec(m, q, (0..m * q).map(|_| T::lit(0.1 * rng.random::<f64>())).collect())?;
    normalize_columns(&mut d0);
    Ok(DictionaryData {
        dims,
        a,
        c_tilde,
        a_prime,
        d0,
        c0: Mat::zeros(q, n_prime),
    })
}

/// Objective value and partial gradients at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct DictionaryEval<T> {
    pub value: T,
    pub grad_d: Mat<T>,
    pub grad_c: Mat<T>,
    pub grad_y: T,
}

/// `L((D', C'), y) = 1/(2n') ||A' - D'C'||_F^2 + y (1/(2n) ||A - D' C~||_F^2 - delta)`
/// over unit-norm dictionary columns, `||C'||_* <= r` and `y in [0, B]`.
///
/// The primal vector holds `D'` column by column (`m q` entries) followed by
/// `C'` row by row (`q n'` entries).
#[derive(Debug, Clone)]
pub struct DictionaryLearning<T> {
    dims: DictionaryDims,
    a: Mat<T>,
    c_tilde: Mat<T>,
    a_prime: Mat<T>,
    delta: T,
    radius: T,
    bound: T,
    smooth: Smoothness<T>,
}

impl<T: Scalar> DictionaryLearning<T> {
    /// Smoothness constants are the analytic bounds over the feasible set:
    ///
    /// * `l_yx = (||A||_F + sqrt(q) ||C~||_2) ||C~||_2 / n`
    /// * `l_xx = ((r + sqrt(q))^2 + ||A'||_F + sqrt(q) r) / n' + B ||C~||_2^2 / n`
    pub fn new(data: &DictionaryData<T>, delta: T, radius: T, bound: T) -> Result<Self> {
        data.dims.validate()?;
        let DictionaryDims { m, n, q, n_prime, .. } = data.dims;
        check_dim("A rows", m, data.a.rows)?;
        check_dim("A columns", n, data.a.cols)?;
        check_dim("C~ rows", q, data.c_tilde.rows)?;
        check_dim("C~ columns", n, data.c_tilde.cols)?;
        check_dim("A' rows", m, data.a_prime.rows)?;
        check_dim("A' columns", n_prime, data.a_prime.cols)?;
        for (name, v) in [("delta", delta), ("radius", radius), ("bound", bound)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::invalid(name, "must be finite and positive"));
            }
        }
        let ct = spectral_norm(&data.c_tilde);
        let sq = T::from_usize_lossy(q).sqrt();
        let nf = T::from_usize_lossy(n);
        let npf = T::from_usize_lossy(n_prime);
        let l_yx = (data.a.frobenius() + sq * ct) * ct / nf;
        let l_xx = ((radius + sq).powi(2) + data.a_prime.frobenius() + sq * radius) / npf + bound * ct * ct / nf;
        let smooth = Smoothness::new(l_xx, l_yx, T::zero(), T::zero())?;
        Ok(Self {
            dims: data.dims,
            a: data.a.clone(),
            c_tilde: data.c_tilde.clone(),
            a_prime: data.a_prime.clone(),
            delta,
            radius,
            bound,
            smooth,
        })
    }

    pub fn dims(&self) -> DictionaryDims {
        self.dims
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    /// `X` = unit balls for each dictionary column times the nuclear ball,
    /// `Y = [0, B]`.
    pub fn feasible_sets(&self) -> Result<(ProductSet<T>, BoxSet<T>)> {
        let DictionaryDims { m, q, n_prime, .. } = self.dims;
        let mut blocks: Vec<Box<dyn FeasibleSet<T>>> = Vec::with_capacity(q + 1);
        for _ in 0..q {
            blocks.push(Box::new(L2Ball::centered(m, T::one())?));
        }
        blocks.push(Box::new(NuclearBall::new(q, n_prime, self.radius)?));
        Ok((ProductSet::new(blocks)?, BoxSet::interval(T::zero(), self.bound)?))
    }

    pub fn pack(&self, d: &Mat<T>, c: &Mat<T>) -> Result<Vec<T>> {
        let DictionaryDims { m, q, n_prime, .. } = self.dims;
        check_dim("dictionary rows", m, d.rows)?;
        check_dim("dictionary columns", q, d.cols)?;
        check_dim("coefficient rows", q, c.rows)?;
        check_dim("coefficient columns", n_prime, c.cols)?;
        let mut x = Vec::with_capacity(m * q + c.data.len());
        for j in 0..q {
            x.extend((0..m).map(|i| d.get(i, j)));
        }
        x.extend_from_slice(&c.data);
        Ok(x)
    }

    pub fn unpack(&self, x: &[T]) -> Result<(Mat<T>, Mat<T>)> {
        let DictionaryDims { m, q, n_prime, .. } = self.dims;
        check_dim("primal point", m * q + q * n_prime, x.len())?;
        let mut d = Mat::zeros(m, q);
        for j in 0..q {
            for i in 0..m {
                d.set(i, j, x[j * m + i]);
            }
        }
        let c = Mat::from_vec(q, n_prime, x[m * q..].to_vec())?;
        Ok((d, c))
    }

    /// `(x0, y0)` with `y0 = 0`.
    pub fn initial_point(&self, data: &DictionaryData<T>) -> Result<(Vec<T>, Vec<T>)> {
        Ok((self.pack(&data.d0, &data.c0)?, vec![T::zero()]))
    }

    fn old_residual(&self, d: &Mat<T>) -> Mat<T> {
        self.a.sub(&d.matmul(&self.c_tilde))
    }

    fn constraint_value(&self, d: &Mat<T>) -> T {
        self.old_residual(d).frobenius_sq() / (T::lit(2.0) * T::from_usize_lossy(self.dims.n)) - self.delta
    }

    /// `max{0, 1/(2n) ||A - D' C~||_F^2 - delta}`.
    pub fn infeasibility_of(&self, d: &Mat<T>) -> Result<T> {
        check_dim("dictionary rows", self.dims.m, d.rows)?;
        check_dim("dictionary columns", self.dims.q, d.cols)?;
        Ok(self.constraint_value(d).max(T::zero()))
    }

    pub fn eval_and_grads(&self, d: &Mat<T>, c: &Mat<T>, y: T) -> Result<DictionaryEval<T>> {
        self.pack(d, c)?;
        if !(y >= T::zero()) {
            return Err(Error::invalid("y", "must be nonnegative"));
        }
        Ok(self.eval_unchecked(d, c, y))
    }

    fn eval_unchecked(&self, d: &Mat<T>, c: &Mat<T>, y: T) -> DictionaryEval<T> {
        let nf = T::from_usize_lossy(self.dims.n);
        let npf = T::from_usize_lossy(self.dims.n_prime);
        let two = T::lit(2.0);
        let r_new = self.a_prime.sub(&d.matmul(c));
        let r_old = self.old_residual(d);
        let grad_y = r_old.frobenius_sq() / (two * nf) - self.delta;
        let value = r_new.frobenius_sq() / (two * npf) + y * grad_y;
        let mut grad_d = r_new.matmul_t(c);
        let old_part = r_old.matmul_t(&self.c_tilde);
        for (g, o) in grad_d.data.iter_mut().zip(&old_part.data) {
            *g = -(*g / npf) - y * *o / nf;
        }
        let mut grad_c = d.t_matmul(&r_new);
        grad_c.data.iter_mut().for_each(|g| *g = -*g / npf);
        DictionaryEval {
            value,
            grad_d,
            grad_c,
            grad_y,
        }
    }

    fn eval_flat(&self, x: &[T], y: &[T]) -> DictionaryEval<T> {
        let (d, c) = self.unpack(x).expect("dimension checked by caller");
        self.eval_unchecked(&d, &c, y[0])
    }
}

impl<T: Scalar> SaddleObjective<T> for DictionaryLearning<T> {
    fn dim_x(&self) -> usize {
        self.dims.m * self.dims.q + self.dims.q * self.dims.n_prime
    }

    fn dim_y(&self) -> usize {
        1
    }

    fn value(&self, x: &[T], y: &[T]) -> T {
        self.eval_flat(x, y).value
    }

    fn grad_x(&self, x: &[T], y: &[T]) -> Vec<T> {
        let e = self.eval_flat(x, y);
        self.pack(&e.grad_d, &e.grad_c).expect("gradient shapes match")
    }

    fn grad_y(&self, x: &[T], _y: &[T]) -> Vec<T> {
        let (d, _) = self.unpack(x).expect("dimension checked by caller");
        vec![self.constraint_value(&d)]
    }

    fn smoothness(&self) -> Smoothness<T> {
        self.smooth
    }

    fn infeasibility(&self, x: &[T]) -> Option<T> {
        let (d, _) = self.unpack(x).ok()?;
        Some(self.constraint_value(&d).max(T::zero()))
    }
}
