use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::sparse::{CsrMatrix, SparseDataset};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sparse multiclass data drawn from random linear class prototypes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticClassification {
    pub samples: usize,
    pub features: usize,
    pub classes: usize,
    /// Nonzeros per sample.
    pub nnz_per_row: usize,
    /// Standard deviation of the score noise before the argmax.
    pub noise: f64,
}

/// Each sample gets `nnz_per_row` Gaussian entries at random positions,
/// normalized to unit length, and the label `argmax_j <w_j, a> + noise`.
pub fn synthetic_classification<T: Scalar>(spec: &SyntheticClassification, seed: u64) -> Result<SparseDataset<T>> {
    if spec.samples == 0 || spec.features == 0 || spec.classes < 2 {
        return Err(Error::invalid(
            "synthetic",
            "need samples, features > 0 and classes >= 2",
        ));
    }
    if spec.nnz_per_row == 0 || spec.nnz_per_row > spec.features {
        return Err(Error::invalid("nnz_per_row", "must be in 1..=features"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let protos: Vec<f64> = (0..spec.classes * spec.features)
        .map(|_| rng.sample(StandardNormal))
        .collect();
    let mut rows = Vec::with_capacity(spec.samples);
    let mut labels = Vec::with_capacity(spec.samples);
    for _ in 0..spec.samples {
        let mut idx = rand::seq::index::sample(&mut rng, spec.features, spec.nnz_per_row).into_vec();
        idx.sort_unstable();
        let mut vals: Vec<f64> = idx.iter().map(|_| rng.sample(StandardNormal)).collect();
        let len = vals.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
        vals.iter_mut().for_each(|v| *v /= len);
        let mut best = (0, f64::NEG_INFINITY);
        for c in 0..spec.classes {
            let w = &protos[c * spec.features..(c + 1) * spec.features];
            let noise: f64 = rng.sample(StandardNormal);
            let score = idx.iter().zip(&vals).map(|(&j, &v)| w[j] * v).sum::<f64>() + spec.noise * noise;
            if score > best.1 {
                best = (c, score);
            }
        }
        labels.push(best.0 as i64 + 1);
        rows.push(idx.into_iter().zip(vals.into_iter().map(T::lit)).collect::<Vec<_>>());
    }
    let features = CsrMatrix::from_rows(spec.features, &rows)?;
    SparseDataset::from_raw_labels(features, &labels)
}
