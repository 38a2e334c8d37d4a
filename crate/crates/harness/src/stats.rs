use std::fmt::Write as _;
use std::path::Path;

use saddlefw::ingest::{read_libsvm_file, ParseOptions, SparseDataset};

use crate::error::{HarnessError, Result};

pub fn load_dataset(path: &Path, opts: ParseOptions) -> Result<SparseDataset<f64>> {
    read_libsvm_file(path, opts).map_err(|e| HarnessError::config(format!("{}: {e}", path.display())))
}

/// Sizes, density and per-class counts with the original label ids.
pub fn describe(ds: &SparseDataset<f64>) -> String {
    let n = ds.len();
    let d = ds.dim();
    let nnz = ds.features.nnz();
    let density = if n * d == 0 {
        0.0
    } else {
        nnz as f64 / (n as f64 * d as f64)
    };
    let mut out = String::new();
    let _ = writeln!(out, "samples {n}");
    let _ = writeln!(out, "features {d}");
    let _ = writeln!(out, "nonzeros {nnz}");
    let _ = writeln!(out, "density {density:.6e}");
    let _ = writeln!(out, "classes {}", ds.num_classes());
    for (i, count) in ds.class_counts().iter().enumerate() {
        let raw = ds.raw_label(i + 1).unwrap_or_default();
        let _ = writeln!(out, "class {} (label {raw}) {count}", i + 1);
    }
    out
}
