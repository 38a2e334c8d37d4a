//! Dataset ingestion: LIBSVM text files and seeded synthetic data.

mod libsvm;
mod sparse;
mod synthetic;

pub use libsvm::{parse_libsvm, parse_libsvm_str, read_libsvm_file, train_subsample, write_libsvm, ParseOptions};
pub use sparse::{CsrMatrix, SparseDataset};
pub use synthetic::{synthetic_classification, SyntheticClassification};
