use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Compressed-row sparse matrix with strictly increasing column indices per row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    rows: usize,
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> CsrMatrix<T> {
    pub fn new(rows: usize, cols: usize, indptr: Vec<usize>, indices: Vec<usize>, values: Vec<T>) -> Result<Self> {
        if indptr.len() != rows + 1 || indptr[0] != 0 {
            return Err(Error::invalid("indptr", "must have rows + 1 entries starting at 0"));
        }
        if indptr.windows(2).any(|w| w[0] > w[1]) || indptr[rows] != indices.len() {
            return Err(Error::invalid("indptr", "must be nondecreasing and end at nnz"));
        }
        if indices.len() != values.len() {
            return Err(Error::invalid("values", "one value per index"));
        }
        for i in 0..rows {
            let idx = &indices[indptr[i]..indptr[i + 1]];
            if idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid("indices", format!("row {i} is not strictly increasing")));
            }
            if idx.last().is_some_and(|&j| j >= cols) {
                return Err(Error::invalid("indices", format!("row {i} exceeds {cols} columns")));
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("sparse values"));
        }
        Ok(Self {
            rows,
            cols,
            indptr,
            indices,
            values,
        })
    }

    /// Builds from per-row `(index, value)` lists that are already sorted.
    pub fn from_rows(cols: usize, rows: &[Vec<(usize, T)>]) -> Result<Self> {
        let mut indptr = Vec::with_capacity(rows.len() + 1);
        indptr.push(0);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for r in rows {
            for &(j, v) in r {
                indices.push(j);
                values.push(v);
            }
            indptr.push(indices.len());
        }
        Self::new(rows.len(), cols, indptr, indices, values)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[T]) {
        let r = self.indptr[i]..self.indptr[i + 1];
        (&self.indices[r.clone()], &self.values[r])
    }

    /// `<row_i, dense>` for a dense vector of length `cols`.
    pub fn row_dot(&self, i: usize, dense: &[T]) -> T {
        let (idx, val) = self.row(i);
        idx.iter().zip(val).fold(T::zero(), |acc, (&j, &v)| acc + v * dense[j])
    }

    pub fn row_norm_sq(&self, i: usize) -> T {
        self.row(i).1.iter().map(|&v| v * v).sum()
    }

    pub fn frobenius_sq(&self) -> T {
        self.values.iter().map(|&v| v * v).sum()
    }

    /// Keeps the given rows, in the given order.
    pub fn select_rows(&self, keep: &[usize]) -> Self {
        let mut indptr = vec![0];
        let mut indices = Vec::new();
        let mut values = Vec::new();
        for &i in keep {
            let (idx, val) = self.row(i);
            indices.extend_from_slice(idx);
            values.extend_from_slice(val);
            indptr.push(indices.len());
        }
        Self {
            rows: keep.len(),
            cols: self.cols,
            indptr,
            indices,
            values,
        }
    }
}

/// Labelled sparse samples. Labels are contiguous class ids `1..=k`; the
/// original ids are kept in `label_map`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseDataset<T> {
    pub features: CsrMatrix<T>,
    pub labels: Vec<usize>,
    /// Original label -> contiguous class id.
    pub label_map: BTreeMap<i64, usize>,
}

impl<T: Scalar> SparseDataset<T> {
    /// Maps raw labels to `1..=k` in ascending order of the raw value.
    pub fn from_raw_labels(features: CsrMatrix<T>, raw: &[i64]) -> Result<Self> {
        if raw.len() != features.rows() {
            return Err(Error::DimensionMismatch {
                context: "labels",
                expected: features.rows(),
                got: raw.len(),
            });
        }
        let mut label_map = BTreeMap::new();
        for &l in raw {
            label_map.insert(l, 0);
        }
        for (i, v) in label_map.values_mut().enumerate() {
            *v = i + 1;
        }
        let labels = raw.iter().map(|l| label_map[l]).collect();
        Ok(Self {
            features,
            labels,
            label_map,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features.cols()
    }

    pub fn num_classes(&self) -> usize {
        self.label_map.len()
    }

    /// Original label of class id `c`.
    pub fn raw_label(&self, class: usize) -> Option<i64> {
        self.label_map.iter().find_map(|(&raw, &c)| (c == class).then_some(raw))
    }

    /// Sample count per contiguous class id (index 0 is class 1).
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.num_classes()];
        for &l in &self.labels {
            counts[l - 1] += 1;
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csr_validation() {
        assert!(CsrMatrix::<f64>::new(1, 3, vec![0, 2], vec![2, 1], vec![1.0, 1.0]).is_err());
        assert!(CsrMatrix::<f64>::new(1, 2, vec![0, 1], vec![2], vec![1.0]).is_err());
        assert!(CsrMatrix::<f64>::new(1, 3, vec![0, 1], vec![0], vec![f64::NAN]).is_err());
        let m = CsrMatrix::new(2, 3, vec![0, 2, 3], vec![0, 2, 1], vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(m.row_dot(0, &[1.0, 10.0, 100.0]), 201.0);
        assert_eq!(m.frobenius_sq(), 14.0);
        assert_eq!(m.select_rows(&[1]).row(0), (&[1usize][..], &[3.0][..]));
    }

    #[test]
    fn labels_are_reindexed_ascending() {
        let f = CsrMatrix::<f64>::from_rows(1, &[vec![], vec![], vec![]]).unwrap();
        let ds = SparseDataset::from_raw_labels(f, &[9, 5, 9]).unwrap();
        assert_eq!(ds.labels, vec![2, 1, 2]);
        assert_eq!(ds.class_counts(), vec![1, 2]);
        assert_eq!(ds.raw_label(2), Some(9));
    }
}
