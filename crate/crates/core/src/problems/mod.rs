//! Concrete saddle objectives.
//!
//! * [`RobustMulticlass`]: sample-reweighted multiclass logistic loss over a
//!   chi-square ambiguity set.
//! * [`DictionaryLearning`]: dictionary refinement with a relaxed
//!   reconstruction constraint on the old data.
//! * [`QuadraticSaddle`]: quadratic test problems with a closed-form dual
//!   maximizer.

mod dictionary;
mod quadratic;
mod robust;

pub use dictionary::{generate_dictionary_dataset, DictionaryData, DictionaryDims, DictionaryEval, DictionaryLearning};
pub use quadratic::QuadraticSaddle;
pub use robust::{logistic, multiclass_loss, multiclass_margin, softplus, RobustMulticlass};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::linalg::{dist, norm, sub};
use crate::objective::SaddleObjective;
use crate::scalar::Scalar;
use crate::sets::FeasibleSet;

/// Largest gradient difference quotients seen over random feasible pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzEstimate<T> {
    pub l_xx: T,
    pub l_yx: T,
    pub l_yy: T,
    /// Number of sampled pairs per constant.
    pub samples: usize,
}

/// Lower estimates of the smoothness constants from `samples` random pairs:
/// `||grad_x L(x1,y) - grad_x L(x2,y)|| / ||x1 - x2||` for `l_xx`, the same
/// quotient of `grad_y` for `l_yx`, and the `y`-quotient of `grad_y` for `l_yy`.
pub fn estimate_smoothness<T, O>(
    obj: &O,
    x_set: &dyn FeasibleSet<T>,
    y_set: &dyn FeasibleSet<T>,
    samples: usize,
    seed: u64,
) -> Result<LipschitzEstimate<T>>
where
    T: Scalar,
    O: SaddleObjective<T> + ?Sized,
{
    if samples == 0 {
        return Err(Error::invalid("samples", "must be positive"));
    }
    check_dim("primal set", obj.dim_x(), x_set.dim())?;
    check_dim("dual set", obj.dim_y(), y_set.dim())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let quotient = |a: Vec<T>, b: Vec<T>, step: T| {
        if step > T::zero() {
            norm(&sub(&a, &b)) / step
        } else {
            T::zero()
        }
    };
    let mut est = LipschitzEstimate {
        l_xx: T::zero(),
        l_yx: T::zero(),
        l_yy: T::zero(),
        samples,
    };
    for _ in 0..samples {
        let x1 = x_set.sample(&mut rng);
        let x2 = x_set.sample(&mut rng);
        let y1 = y_set.sample(&mut rng);
        let y2 = y_set.sample(&mut rng);
        let dx = dist(&x1, &x2);
        let dy = dist(&y1, &y2);
        est.l_xx = est.l_xx.max(quotient(obj.grad_x(&x1, &y1), obj.grad_x(&x2, &y1), dx));
        est.l_yx = est.l_yx.max(quotient(obj.grad_y(&x1, &y1), obj.grad_y(&x2, &y1), dx));
        est.l_yy = est.l_yy.max(quotient(obj.grad_y(&x1, &y1), obj.grad_y(&x1, &y2), dy));
    }
    Ok(est)
}
