use rand::RngCore;

use super::{check_input, FeasibleSet};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Cartesian product of sets over consecutive blocks of one flat vector.
/// Never strongly convex.
#[derive(Debug)]
pub struct ProductSet<T> {
    blocks: Vec<Box<dyn FeasibleSet<T>>>,
    offsets: Vec<usize>,
}

impl<T: Scalar> ProductSet<T> {
    pub fn new(blocks: Vec<Box<dyn FeasibleSet<T>>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::invalid("blocks", "product needs at least one block"));
        }
        let mut offsets = Vec::with_capacity(blocks.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for b in &blocks {
            acc += b.dim();
            offsets.push(acc);
        }
        Ok(Self { blocks, offsets })
    }

    pub fn blocks(&self) -> &[Box<dyn FeasibleSet<T>>] {
        &self.blocks
    }

    /// Start of each block, plus the total dimension at the end.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    fn range(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    fn blockwise<F>(&self, v: &[T], mut f: F) -> Result<Vec<T>>
    where
        F: FnMut(&dyn FeasibleSet<T>, &[T]) -> Result<Vec<T>>,
    {
        let mut out = Vec::with_capacity(self.dim());
        for (i, b) in self.blocks.iter().enumerate() {
            out.extend(f(b.as_ref(), &v[self.range(i)])?);
        }
        Ok(out)
    }
}

impl<T: Scalar> FeasibleSet<T> for ProductSet<T> {
    fn name(&self) -> &'static str {
        "product set"
    }

    fn dim(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    fn lmo(&self, c: &[T]) -> Result<Vec<T>> {
        check_input(self.dim(), c, "lmo cost")?;
        self.blockwise(c, |b, ci| b.lmo(ci))
    }

    fn project(&self, p: &[T]) -> Result<Vec<T>> {
        check_input(self.dim(), p, "projection input")?;
        self.blockwise(p, |b, pi| b.project(pi))
    }

    fn has_projection(&self) -> bool {
        self.blocks.iter().all(|b| b.has_projection())
    }

    fn violation(&self, p: &[T]) -> T {
        self.blocks
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (i, b)| acc.max(b.violation(&p[self.range(i)])))
    }

    fn diameter(&self) -> T {
        self.blocks
            .iter()
            .map(|b| {
                let d = b.diameter();
                d * d
            })
            .sum::<T>()
            .sqrt()
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Vec<T> {
        self.blocks.iter().flat_map(|b| b.sample(rng)).collect()
    }
}
